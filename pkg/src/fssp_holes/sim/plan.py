"""Message-timing simulation of pattern-keyed partial synchronizers.

A plan fixes a target size, a slack, a checked region with its expected
node/hole pattern, and groups of message sites.  Size-check messages are
born at the far corners at time w exactly when the configuration has the
target size; pattern messages are born at their sites (general-distance
plus offset) exactly when the configuration carries the plan's pattern.
All messages propagate at speed 1 along shortest node paths.  A node is
willing to fire at 2*target + slack when it holds a size-check message and
every message of at least one group; the run synchronizes exactly when all
nodes are willing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import OutOfSquareError
from ..grid import (
    V_GEN,
    Configuration,
    Pattern,
    Position,
    distance_grid,
    has_pattern,
    mh_distance,
    pattern_of,
    validate,
)
from ..timebounds import has_critical_pair, max_t
from .transcript import FiringTranscript


@dataclass(frozen=True)
class MessagePlan:
    target_size: int
    slack: int
    checked_region: frozenset[Position]
    groups: tuple[tuple[tuple[Position, int], ...], ...]
    pattern: Pattern

    def __post_init__(self):
        object.__setattr__(
            self, "checked_region", frozenset(Position(*p) for p in self.checked_region)
        )
        object.__setattr__(
            self,
            "groups",
            tuple(
                tuple((Position(*site), int(off)) for site, off in group)
                for group in self.groups
            ),
        )
        if self.slack < 0:
            raise ValueError("slack must be nonnegative")
        for group in self.groups:
            for site, off in group:
                if off < 0:
                    raise ValueError("message offsets must be nonnegative")
                if (site, "H") in self.pattern.assignments:
                    raise ValueError(f"site {tuple(site)} is a hole under the pattern")

    @property
    def deadline(self) -> int:
        return 2 * self.target_size + self.slack


def run_message_plan(cfg: Configuration, plan: MessagePlan) -> FiringTranscript:
    """Simulate the plan on cfg: simultaneous firing at the deadline or none.

    The transcript's diagnostics carry the per-node willingness map, so a
    plan that reaches only part of the square is visible as such.
    """
    deadline = plan.deadline
    willing: dict[Position, bool] = {}
    nodes = list(cfg.nodes())

    size_ok = cfg.size == plan.target_size
    if size_ok:
        w = cfg.size
        d_nw = distance_grid(cfg, Position(0, w))
        d_se = distance_grid(cfg, Position(w, 0))
    msgs_exist = size_ok and has_pattern(cfg, plan.pattern)
    group_arrivals: list[list[tuple[int, tuple[int, ...]]]] = []
    site_fields = []
    if msgs_exist:
        for group in plan.groups:
            fields = []
            for site, off in group:
                birth = mh_distance(V_GEN, site) + off
                fields.append((birth, distance_grid(cfg, site)))
            site_fields.append(fields)

    for v in nodes:
        if not msgs_exist:
            willing[v] = False
            continue
        i = cfg.index(v)
        w_arrival = cfg.size + min(d_nw[i], d_se[i])
        if w_arrival > deadline:
            willing[v] = False
            continue
        if not plan.groups:
            willing[v] = True  # size-check-only firing rule
            continue
        ok = any(
            all(birth + dist[i] <= deadline and dist[i] >= 0 for birth, dist in fields)
            for fields in site_fields
        )
        willing[v] = ok

    all_fire = all(willing.values())
    fire = {v: (deadline if all_fire else None) for v in nodes}
    return FiringTranscript(
        fire,
        horizon=deadline,
        diagnostics={
            "size_ok": size_ok,
            "messages_generated": msgs_exist,
            "willing": willing,
            "unwilling": sorted(tuple(v) for v, ok in willing.items() if not ok),
        },
    )


@dataclass
class PlanCheckReport:
    """Computational verification of the plan-correctness conditions.

    c1: every same-size completion of the pattern keeps the through-corner
        bound within the deadline (for two holes, via the critical-pair
        criterion when the slack is zero);
    c2: each group's messages jointly pin exactly the plan pattern (all
        message groups share the plan pattern here, so this holds by
        construction);
    c5: every node of the reference configuration is reached by a full
        message group within the deadline.  (c3/c4 are how the simulator
        generates messages, true by construction.)
    """

    c1_ok: bool
    c2_ok: bool
    c5_ok: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.c1_ok and self.c2_ok and self.c5_ok


def pattern_completions(plan: MessagePlan, k: int) -> list[Configuration]:
    """All valid configurations of the target size with k holes and the pattern."""
    w = plan.target_size
    pinned = plan.pattern.holes()
    free = k - len(pinned)
    if free < 0:
        return []
    domain = plan.pattern.domain
    candidates = [
        Position(x, y)
        for x in range(1, w)
        for y in range(1, w)
        if Position(x, y) not in domain
    ]
    outs = []

    def rec(start: int, chosen: list[Position]):
        if len(chosen) == free:
            try:
                outs.append(validate(w, pinned | set(chosen)))
            except Exception:
                pass
            return
        for i in range(start, len(candidates)):
            chosen.append(candidates[i])
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return outs


def check_c_conditions(plan: MessagePlan, cfg: Configuration) -> PlanCheckReport:
    """Verify C1 (all completions in time), C5 (coverage on cfg); C2 structural."""
    failures: list[str] = []
    deadline = plan.deadline
    w = plan.target_size
    if cfg.size != w:
        raise OutOfSquareError(f"plan targets w={w}, configuration has {cfg.size}")
    if not has_pattern(cfg, plan.pattern):
        failures.append("reference configuration does not carry the plan pattern")

    c1_ok = True
    for comp in pattern_completions(plan, cfg.k):
        if cfg.k == 2 and plan.slack == 0:
            bad = has_critical_pair(comp)
        else:
            bad = max_t(comp) > deadline
        if bad:
            c1_ok = False
            failures.append(
                f"C1: completion with holes {sorted(tuple(h) for h in comp.holes)} "
                f"exceeds the deadline"
            )
            break

    c5_ok = True
    if plan.groups:
        fields = [
            [(mh_distance(V_GEN, site) + off, distance_grid(cfg, site)) for site, off in group]
            for group in plan.groups
        ]
        for v in cfg.nodes():
            i = cfg.index(v)
            if not any(
                all(birth + dist[i] <= deadline for birth, dist in group)
                for group in fields
            ):
                c5_ok = False
                failures.append(f"C5: node {tuple(v)} is not covered by any group")

    return PlanCheckReport(c1_ok=c1_ok, c2_ok=True, c5_ok=c5_ok, failures=failures)


# ---------------------------------------------------------------------------
# Plan files


def plan_to_json(plan: MessagePlan) -> str:
    doc = {
        "target_size": plan.target_size,
        "slack": plan.slack,
        "checked_region": sorted([p.x, p.y] for p in plan.checked_region),
        "groups": [
            [[[site.x, site.y], off] for site, off in group] for group in plan.groups
        ],
        "pattern": {
            "nodes": sorted([p.x, p.y] for p, lbl in plan.pattern.assignments if lbl == "N"),
            "holes": sorted([p.x, p.y] for p, lbl in plan.pattern.assignments if lbl == "H"),
        },
    }
    return json.dumps(doc, separators=(", ", ": "))


def plan_from_json(text: str) -> MessagePlan:
    doc = json.loads(text)
    pattern = Pattern(
        frozenset(
            [(Position(*p), "N") for p in doc["pattern"]["nodes"]]
            + [(Position(*p), "H") for p in doc["pattern"]["holes"]]
        )
    )
    return MessagePlan(
        target_size=doc["target_size"],
        slack=doc["slack"],
        checked_region=frozenset(Position(*p) for p in doc["checked_region"]),
        groups=tuple(
            tuple((Position(*site), off) for site, off in group) for group in doc["groups"]
        ),
        pattern=pattern,
    )


def worked_instance_plan() -> MessagePlan:
    """The worked single-configuration plan: size 7, a hole run along y=1.

    Size-check messages plus one message at (3, 0) keyed on the pattern
    "holes at (1,1), (2,1), (3,1)"; fires its one admissible configuration
    at exactly 14.
    """
    holes = [(1, 1), (2, 1), (3, 1)]
    pattern = Pattern(frozenset((Position(*h), "H") for h in holes))
    return MessagePlan(
        target_size=7,
        slack=0,
        checked_region=frozenset(Position(*h) for h in holes),
        groups=(((Position(3, 0), 0),),),
        pattern=pattern,
    )
