import pytest

from fssp_holes.grid import Pattern, Position, pattern_of, regions, validate
from fssp_holes.shapes import compute_ck
from fssp_holes.sim.plan import (
    MessagePlan,
    check_c_conditions,
    pattern_completions,
    plan_from_json,
    plan_to_json,
    run_message_plan,
    worked_instance_plan,
)


class TestWorkedInstance:
    def test_fires_target_at_14(self):
        plan = worked_instance_plan()
        cfg = validate(7, [(1, 1), (2, 1), (3, 1)])
        assert run_message_plan(cfg, plan).common_fire_time() == 14
        report = check_c_conditions(plan, cfg)
        assert report.ok

    @pytest.mark.parametrize("w", [6, 8])
    def test_size_mismatch_never_fires(self, w):
        plan = worked_instance_plan()
        tr = run_message_plan(validate(w, [(1, 1), (2, 1), (3, 1)]), plan)
        assert tr.common_fire_time() is None
        assert not tr.diagnostics["size_ok"]

    def test_pattern_mismatch_never_fires(self):
        plan = worked_instance_plan()
        tr = run_message_plan(validate(7, [(1, 1), (2, 1), (4, 1)]), plan)
        assert tr.common_fire_time() is None
        assert not tr.diagnostics["messages_generated"]


class TestSizeCheckOnlyPlan:
    def test_fires_everything_at_h(self):
        # fire on the size-check messages alone at 2w + c_2
        c2 = compute_ck(2).c_k
        plan = MessagePlan(12, c2, frozenset(), (), Pattern(frozenset()))
        for holes in ([(6, 4), (7, 5)], [(3, 3), (8, 8)], [(10, 3), (3, 10)]):
            tr = run_message_plan(validate(12, holes), plan)
            assert tr.common_fire_time() == 24 + c2
        report = check_c_conditions(plan, validate(12, [(6, 4), (7, 5)]))
        assert report.ok

    def test_zero_slack_version_fails_c1(self):
        plan = MessagePlan(12, 0, frozenset(), (), Pattern(frozenset()))
        report = check_c_conditions(plan, validate(12, [(3, 3), (8, 8)]))
        assert not report.c1_ok  # a critical-pair completion exceeds 2w


class TestC5Failure:
    def test_site_next_to_exception_geometry(self):
        w = 12
        fam = regions(w)
        vc = fam.v_cnt
        cfg = validate(w, [vc + (0, 1), vc + (1, 0)])
        plan = MessagePlan(
            w, 0, frozenset(fam.UVW), (((vc, 0),),), pattern_of(cfg, fam.UVW)
        )
        report = check_c_conditions(plan, cfg)
        assert not report.c5_ok
        failing = {f for f in report.failures if f.startswith("C5")}
        assert any("(12, 12)" in f for f in failing)
        # and the run does not fire anybody
        assert run_message_plan(cfg, plan).common_fire_time() is None


class TestCompletions:
    def test_pinned_pattern_has_single_completion(self):
        cfg = validate(12, [(4, 6), (5, 3)])
        fam = regions(12)
        plan = MessagePlan(
            12, 0, frozenset(fam.UV), (((fam.v_cnt, 0),),), pattern_of(cfg, fam.UV)
        )
        comps = pattern_completions(plan, 2)
        assert comps == [cfg]

    def test_free_hole_enumeration(self):
        cfg = validate(12, [(5, 7), (9, 2)])
        fam = regions(12)
        pat = pattern_of(cfg, fam.UVW)
        plan = MessagePlan(12, 0, frozenset(fam.UVW), (((fam.v_cnt, 0),),), pat)
        comps = pattern_completions(plan, 2)
        assert all(Position(5, 7) in c.holes for c in comps)
        assert len(comps) == sum(
            1
            for x in range(1, 12)
            for y in range(1, 12)
            if Position(x, y) not in fam.UVW
        )


class TestPlanJson:
    def test_round_trip(self):
        plan = worked_instance_plan()
        text = plan_to_json(plan)
        assert plan_from_json(text) == plan
        assert plan_to_json(plan_from_json(text)) == text

    def test_site_must_not_be_pattern_hole(self):
        with pytest.raises(ValueError):
            MessagePlan(
                5,
                0,
                frozenset({Position(1, 1)}),
                (((Position(1, 1), 0),),),
                Pattern(frozenset({(Position(1, 1), "H")})),
            )
