"""Firing-time lower bounds: through-corner times, critical pairs, and
machine-checkable hole-relocation certificate chains.

T(v, C) is the smaller of the two general-to-v distances routed through the
far corners (0, w) and (w, 0); its maximum over nodes lower-bounds every
solution's firing time.  For two holes, relocation chains that preserve the
pattern on one of the half-plane-like sets H0/H1/H2 witness 2w+1 lower
bounds by reaching a configuration with a critical pair.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .barriers import Rect, barrier_containing
from .errors import (
    NotANodeError,
    NotInBarrierError,
    SizeMismatchError,
    WrongHoleCountError,
)
from .grid import (
    V_GEN,
    Configuration,
    Position,
    boundary_condition,
    distance_grid,
    pattern_of,
    regions,
    validate,
    via_distance,
)
from .shapes import BarrierShape, d0_d1

HALF_PLANES = ("H0", "H1", "H2")

#: Witness node for the pattern-equality theorem, per half-plane.
WITNESS_CORNER = {
    "H0": lambda w: Position(0, 0),
    "H1": lambda w: Position(0, w),
    "H2": lambda w: Position(w, 0),
}


def half_plane_set(w: int, name: str) -> frozenset[Position]:
    fam = regions(w)
    return {"H0": fam.H0, "H1": fam.H1, "H2": fam.H2}[name]


def t_of(cfg: Configuration, v: tuple[int, int]) -> int:
    """min over the far corners (0,w), (w,0) of the through-corner distance."""
    w = cfg.size
    return min(
        via_distance(cfg, V_GEN, (0, w), v),
        via_distance(cfg, V_GEN, (w, 0), v),
    )


def max_t(cfg: Configuration) -> int:
    """max_v T(v, C); always at least 2w."""
    w = cfg.size
    d_nw = distance_grid(cfg, Position(0, w))
    d_se = distance_grid(cfg, Position(w, 0))
    best = 0
    for v in cfg.nodes():
        i = cfg.index(v)
        t = min(d_nw[i], d_se[i])
        if t > best:
            best = t
    return w + best


def t_formula(cfg: Configuration, v: tuple[int, int]) -> int:
    """Closed-form T(v, C) for a node inside a maximal barrier.

    Reads W, H, z, delta off the containing maximal barrier and d0/d1 off
    its enlarged rectangle; equals t_of by the barrier formula.
    """
    v = Position(*v)
    rect = barrier_containing(cfg, v)
    if rect is None or v in cfg.holes:
        raise NotInBarrierError(f"{tuple(v)} lies in no maximal barrier")
    shape = shape_of_barrier(cfg, rect)
    p = v - Position(rect.x0, rect.y0)
    delta = rect.x0 - rect.y0
    d0, d1 = d0_d1(shape, p)
    return 2 * cfg.size + min(
        delta - shape.height - 1 + d0, -delta - shape.width - 1 + d1
    )


def shape_of_barrier(cfg: Configuration, rect: Rect) -> BarrierShape:
    """The barrier shape obtained by translating rect's holes to the origin."""
    holes = frozenset(
        Position(h.x - rect.x0, h.y - rect.y0) for h in cfg.holes if rect.contains(h)
    )
    return BarrierShape(rect.width, rect.height, holes)


def critical_holes(cfg: Configuration) -> frozenset[Position]:
    """Holes at |x - y| = 2."""
    return frozenset(h for h in cfg.holes if abs(h.x - h.y) == 2)


def has_critical_pair(cfg: Configuration) -> bool:
    """True iff two critical holes sit at offset (1, 1)."""
    crit = critical_holes(cfg)
    return any(h + (1, 1) in crit for h in crit)


def critical_pair_theorem_check(cfg: Configuration) -> bool:
    """max_t == 2w+1, asserting the equivalence with has_critical_pair (k=2)."""
    if cfg.k != 2:
        raise WrongHoleCountError(f"theorem needs exactly 2 holes, got {cfg.k}")
    w = cfg.size
    m = max_t(cfg)
    if m not in (2 * w, 2 * w + 1):
        raise AssertionError(f"max_t={m} outside {{2w, 2w+1}} for {cfg}")
    result = m == 2 * w + 1
    if result != has_critical_pair(cfg):
        raise AssertionError(f"critical-pair equivalence violated for {cfg}")
    return result


def _reach_set(cfg: Configuration, v: Position, t: int) -> list[Position]:
    """Nodes on some general-to-v walk of length <= t in cfg."""
    d_gen = distance_grid(cfg, V_GEN)
    d_v = distance_grid(cfg, v)
    out = []
    for u in cfg.nodes():
        i = cfg.index(u)
        if d_gen[i] >= 0 and d_v[i] >= 0 and d_gen[i] + d_v[i] <= t:
            out.append(u)
    return out


def equiv_prime(
    cfg_a: Configuration, cfg_b: Configuration, t: int, v: tuple[int, int]
) -> bool:
    """Walk-wise indistinguishability of the two configurations up to time t at v.

    A node lies on some length-<=t walk from the general to v exactly when
    its two-leg distance sum is <= t; every such node must exist in the other
    configuration with an identical boundary condition, both ways around.
    """
    v = Position(*v)
    for src, dst in ((cfg_a, cfg_b), (cfg_b, cfg_a)):
        if not src.is_node(v) or not dst.is_node(v):
            raise NotANodeError(f"{tuple(v)} must be a node of both configurations")
        for u in _reach_set(src, v, t):
            if not dst.is_node(u):
                return False
            if boundary_condition(src, u) != boundary_condition(dst, u):
                return False
    return True


def pattern_move_equiv(cfg_a: Configuration, cfg_b: Configuration, plane: str) -> bool:
    """Pattern equality of the two configurations on H0, H1 or H2."""
    if cfg_a.size != cfg_b.size:
        raise SizeMismatchError(
            f"sizes differ: {cfg_a.size} vs {cfg_b.size}"
        )
    region = half_plane_set(cfg_a.size, plane)
    return pattern_of(cfg_a, region) == pattern_of(cfg_b, region)


@dataclass(frozen=True)
class ChainStep:
    half_plane: str
    moved_from: Position
    moved_to: Position


@dataclass(frozen=True)
class CertificateChain:
    """A sequence of pattern-preserving single-hole relocations ending in a
    configuration with a critical pair."""

    initial: Configuration
    steps: tuple[ChainStep, ...]
    final: Configuration

    def __len__(self) -> int:
        return len(self.steps)


MAX_CHAIN_DEPTH = 64


def _interior(w: int) -> list[Position]:
    return [Position(x, y) for x in range(1, w) for y in range(1, w)]


@lru_cache(maxsize=8)
def _certificate_forest(w: int):
    """Breadth-first forest over two-hole states, rooted at the goal set.

    Relocation moves are symmetric, so one reverse BFS from every
    critical-pair state yields shortest chains from every start at once.
    Returns (dist, parent) keyed by sorted hole pairs; parent values are
    (next_state, ChainStep) pointing one move closer to the goal.
    """
    cells = _interior(w)
    fam = regions(w)
    outside = {
        name: frozenset(c for c in cells if c not in getattr(fam, name))
        for name in HALF_PLANES
    }

    def is_goal(state: tuple[Position, Position]) -> bool:
        a, b = state
        return abs(a.x - a.y) == 2 and b == a + (1, 1)

    dist: dict[tuple[Position, Position], int] = {}
    parent: dict[tuple[Position, Position], tuple[tuple[Position, Position], ChainStep]] = {}
    queue = deque()
    for a in cells:
        if abs(a.x - a.y) != 2:
            continue
        b = a + (1, 1)
        if 1 <= b.x <= w - 1 and 1 <= b.y <= w - 1:
            state = (a, b) if (a, b) == tuple(sorted((a, b))) else (b, a)
            dist[state] = 0
            queue.append(state)

    while queue:
        state = queue.popleft()
        d = dist[state]
        for moved in state:
            stay = state[0] if moved is state[1] else state[1]
            planes = [name for name in HALF_PLANES if moved in outside[name]]
            if not planes:
                continue
            for target in cells:
                if target == stay or target == moved:
                    continue
                plane = next((nm for nm in planes if target in outside[nm]), None)
                if plane is None:
                    continue
                prev = (stay, target) if stay < target else (target, stay)
                if prev in dist:
                    continue
                dist[prev] = d + 1
                # Forward move (from prev toward the goal): target -> moved.
                parent[prev] = (state, ChainStep(plane, target, moved))
                queue.append(prev)
    return dist, parent


def _state_of(cfg: Configuration) -> tuple[Position, Position]:
    a, b = sorted(cfg.holes)
    return (a, b)


def lower_bound_certificate(cfg: Configuration) -> CertificateChain | None:
    """Shortest relocation chain from cfg to a critical-pair configuration.

    Returns None when no chain exists (or none within the depth cap); use
    certificate_search_report for the distinction.
    """
    chain, _ = certificate_search_report(cfg)
    return chain


def certificate_search_report(
    cfg: Configuration,
) -> tuple[CertificateChain | None, str]:
    if cfg.k != 2:
        raise WrongHoleCountError(f"certificate search needs exactly 2 holes, got {cfg.k}")
    w = cfg.size
    if has_critical_pair(cfg):
        return CertificateChain(cfg, (), cfg), "immediate"
    dist, parent = _certificate_forest(w)
    state = _state_of(cfg)
    if state not in dist:
        return None, "exhausted"
    if dist[state] > MAX_CHAIN_DEPTH:
        return None, "depth-cap"
    steps = []
    configs = [cfg]
    cur = state
    while dist[cur] > 0:
        nxt, step = parent[cur]
        steps.append(step)
        configs.append(validate(w, list(nxt)))
        cur = nxt
    return CertificateChain(cfg, tuple(steps), configs[-1]), "found"


def verify_certificate(chain: CertificateChain, check_equiv: bool = False) -> bool:
    """Replay a chain: validity, half-plane pattern preservation, final pair.

    With check_equiv, additionally confirms the walk-indistinguishability
    relation at t = 2w with the half-plane's witness corner on every step.
    """
    cfg = chain.initial
    w = cfg.size
    for step in chain.steps:
        if step.moved_from not in cfg.holes:
            return False
        new_holes = (cfg.holes - {step.moved_from}) | {Position(*step.moved_to)}
        try:
            nxt = validate(w, new_holes)
        except Exception:
            return False
        plane = half_plane_set(w, step.half_plane)
        if step.moved_from in plane or Position(*step.moved_to) in plane:
            return False
        if not pattern_move_equiv(cfg, nxt, step.half_plane):
            return False
        if check_equiv:
            corner = WITNESS_CORNER[step.half_plane](w)
            if not equiv_prime(cfg, nxt, 2 * w, corner):
                return False
        cfg = nxt
    return cfg == chain.final and has_critical_pair(cfg)
