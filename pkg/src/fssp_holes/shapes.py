"""Barrier-shape enumeration and the worst-case excess constants c_k.

A barrier shape is a W x H hole grid in which every row and every column
contains a hole, detached from any particular configuration.  For a node p
of the shape, d0/d1 are shortest-path lengths from the northwest/southeast
corners of the one-cell-enlarged rectangle, and the shape's worst-case
contribution to the through-corner time bound is

    e_max = (-W - H - 2 + d0 + d1) / 2,

maximised over all shapes with at most k holes to give c_k.
"""

from __future__ import annotations

import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import BudgetExceededError, UnreachableError
from .grid import Position

HARD_MAX_K = 7
DEFAULT_BUDGET_K = 6

#: Reference values (k -> (c_k, shapes, pairs, argmax pairs)) that the
#: enumeration reproduces.  Rows 8 and 9 are beyond desk-scale compute and
#: are kept for documentation only.
REFERENCE_CK_TABLE: dict[int, tuple[int, int, int, int]] = {
    2: (1, 5, 4, 2),
    3: (1, 29, 80, 34),
    4: (2, 224, 1_324, 16),
    5: (3, 2_220, 22_588, 24),
    6: (4, 26_898, 416_782, 14),
    7: (5, 384_344, 8_397_762, 20),
    8: (6, 6_314_747, 184_619_252, 26),
    9: (7, 117_140_060, 4_411_162_884, 32),
}


def effective_budget(budget: int | None = None) -> int:
    """The configured k cap: explicit argument, FSSP_BUDGET_K, or the default."""
    if budget is not None:
        return min(budget, HARD_MAX_K)
    env = os.environ.get("FSSP_BUDGET_K")
    if env is not None:
        return min(int(env), HARD_MAX_K)
    return DEFAULT_BUDGET_K


def _check_budget(k: int, budget: int | None) -> None:
    cap = effective_budget(budget)
    if k > cap:
        raise BudgetExceededError(
            f"k={k} exceeds the configured cap {cap}"
            + (" (hard ceiling 7)" if k > HARD_MAX_K else "; raise with --budget-k/FSSP_BUDGET_K")
        )
    if k < 1:
        raise BudgetExceededError(f"k must be >= 1, got {k}")


@dataclass(frozen=True)
class BarrierShape:
    """A W x H grid of cells with a covering hole set."""

    width: int
    height: int
    holes: frozenset[Position]

    def __post_init__(self):
        object.__setattr__(self, "holes", frozenset(Position(*h) for h in self.holes))

    @property
    def k(self) -> int:
        return len(self.holes)

    def nodes(self) -> list[Position]:
        return [
            Position(x, y)
            for x in range(self.width)
            for y in range(self.height)
            if Position(x, y) not in self.holes
        ]

    def hole_mask(self) -> int:
        """Row-major bitmask (bit y*W + x), the canonical-ordering key."""
        return sum(1 << (y * self.width + x) for x, y in self.holes)

    def transpose(self) -> "BarrierShape":
        return BarrierShape(
            self.height, self.width, frozenset(Position(y, x) for x, y in self.holes)
        )


@dataclass(frozen=True)
class ShapeEval:
    """d0/d1 and the derived extremal quantities for one (shape, node) pair."""

    d0: int
    d1: int
    e_max: int
    delta_opt: int
    epsilon_opt: int


def _iter_hole_masks(width: int, height: int, k: int, first_masks=None) -> Iterator[tuple[int, ...]]:
    """Row masks (one int per row) of covering hole sets with <= k holes.

    Depth-first over rows; prunes on the hole budget and on column coverage
    (each remaining hole can cover at most one new column).
    """
    full = (1 << width) - 1
    masks_by_count: list[list[int]] = [[] for _ in range(width + 1)]
    for m in range(1, full + 1):
        masks_by_count[bin(m).count("1")].append(m)

    rows: list[int] = []

    def rec(row: int, budget: int, covered: int) -> Iterator[tuple[int, ...]]:
        if row == height:
            if covered == full:
                yield tuple(rows)
            return
        remaining_rows = height - row
        max_count = min(width, budget - (remaining_rows - 1))
        if max_count < 1:
            return
        choices: Iterable[int]
        if row == 0 and first_masks is not None:
            choices = first_masks
        else:
            choices = (m for c in range(1, max_count + 1) for m in masks_by_count[c])
        for m in choices:
            c = bin(m).count("1")
            if c > max_count:
                continue
            new_cov = covered | m
            uncovered = width - bin(new_cov).count("1")
            if uncovered > budget - c:
                continue
            rows.append(m)
            yield from rec(row + 1, budget - c, new_cov)
            rows.pop()

    yield from rec(0, k, 0)


def _shape_from_rows(width: int, height: int, row_masks: tuple[int, ...]) -> BarrierShape:
    holes = frozenset(
        Position(x, y)
        for y, m in enumerate(row_masks)
        for x in range(width)
        if m >> x & 1
    )
    return BarrierShape(width, height, holes)


def _all_nodes_reach_ring(shape: BarrierShape, nw: list[int] | None = None) -> bool:
    """True iff no node of the shape is sealed off from the surrounding ring.

    A shape with a hole-enclosed pocket of nodes cannot occur inside a
    connected configuration, so it is not a member of the shape space.
    """
    if nw is None:
        nw = _corner_distances(shape, Position(-1, shape.height))
    hy = shape.height + 2
    return all(nw[(p.x + 1) * hy + (p.y + 1)] >= 0 for p in shape.nodes())


def enumerate_shapes(k: int, budget: int | None = None) -> Iterator[BarrierShape]:
    """Every barrier shape with at most k holes, each exactly once.

    Raw grids: transposes and reflections are distinct shapes.  Shapes whose
    nodes cannot all reach the surrounding hole-free ring are excluded.
    """
    _check_budget(k, budget)
    for width in range(1, k + 1):
        for height in range(1, k + 1):
            if max(width, height) > k:
                continue
            for row_masks in _iter_hole_masks(width, height, k):
                shape = _shape_from_rows(width, height, row_masks)
                if _all_nodes_reach_ring(shape):
                    yield shape


def _corner_distances(shape: BarrierShape, corner: Position) -> list[int]:
    """BFS distances inside the enlarged rectangle from one of its corners."""
    wx, hy = shape.width + 2, shape.height + 2  # enlarged: [-1..W] x [-1..H]

    def idx(x: int, y: int) -> int:
        return (x + 1) * hy + (y + 1)

    dist = [-1] * (wx * hy)
    for hx, hyy in shape.holes:
        dist[idx(hx, hyy)] = -2
    start = idx(*corner)
    dist[start] = 0
    queue = deque([start])
    while queue:
        i = queue.popleft()
        d1 = dist[i] + 1
        x, y = divmod(i, hy)
        if x + 1 < wx and dist[i + hy] == -1:
            dist[i + hy] = d1
            queue.append(i + hy)
        if x > 0 and dist[i - hy] == -1:
            dist[i - hy] = d1
            queue.append(i - hy)
        if y + 1 < hy and dist[i + 1] == -1:
            dist[i + 1] = d1
            queue.append(i + 1)
        if y > 0 and dist[i - 1] == -1:
            dist[i - 1] = d1
            queue.append(i - 1)
    return dist


def d0_d1(shape: BarrierShape, p: tuple[int, int]) -> tuple[int, int]:
    """Shortest-path lengths from the enlarged rectangle's NW and SE corners to p."""
    p = Position(*p)
    if p in shape.holes or not (0 <= p.x < shape.width and 0 <= p.y < shape.height):
        raise UnreachableError(f"{tuple(p)} is not a node of the shape")
    hy = shape.height + 2
    nw = _corner_distances(shape, Position(-1, shape.height))
    se = _corner_distances(shape, Position(shape.width, -1))
    i = (p.x + 1) * hy + (p.y + 1)
    if nw[i] < 0 or se[i] < 0:
        raise UnreachableError(f"{tuple(p)} unreachable inside the enlarged rectangle")
    return nw[i], se[i]


def e_of(shape: BarrierShape, p: tuple[int, int], delta: int) -> int:
    """min(delta - H - 1 + d0, -delta - W - 1 + d1) for the given diagonal offset."""
    d0, d1 = d0_d1(shape, p)
    return min(delta - shape.height - 1 + d0, -delta - shape.width - 1 + d1)


def _eval_from_distances(shape: BarrierShape, d0: int, d1: int, p: Position) -> ShapeEval:
    total = -shape.width - shape.height - 2 + d0 + d1
    if total % 2:
        raise AssertionError(f"parity violation for {shape} at {tuple(p)}")
    e_max = total // 2
    delta_opt = (-shape.width + shape.height - d0 + d1) // 2
    return ShapeEval(d0, d1, e_max, delta_opt, delta_opt + p.x - p.y)


def evaluate(shape: BarrierShape, p: tuple[int, int]) -> ShapeEval:
    """d0/d1, e_max, delta_opt and epsilon_opt for one node of the shape."""
    p = Position(*p)
    d0, d1 = d0_d1(shape, p)
    ev = _eval_from_distances(shape, d0, d1, p)
    assert e_of(shape, p, ev.delta_opt) == ev.e_max
    return ev


@dataclass(frozen=True)
class CkResult:
    k: int
    c_k: int
    shape_count: int
    pair_count: int
    argmax_pair_count: int
    argmax_pairs: tuple[tuple[BarrierShape, Position], ...]

    def matches_reference(self) -> bool:
        ref = REFERENCE_CK_TABLE.get(self.k)
        return ref == (self.c_k, self.shape_count, self.pair_count, self.argmax_pair_count)


def _scan_shapes(
    width: int, height: int, k: int, first_masks=None
) -> tuple[int, int, int, list[tuple[int, int, int, int, int]]]:
    """Enumerate one (width, height) slab: (shapes, pairs, best, argmax keys)."""
    hy = height + 2
    shapes = 0
    pairs = 0
    best = -1
    arg: list[tuple[int, int, int, int, int]] = []
    for row_masks in _iter_hole_masks(width, height, k, first_masks):
        shape = _shape_from_rows(width, height, row_masks)
        node_list = shape.nodes()
        nw = _corner_distances(shape, Position(-1, height))
        if not _all_nodes_reach_ring(shape, nw):
            continue
        shapes += 1
        if not node_list:
            continue
        se = _corner_distances(shape, Position(width, -1))
        mask = shape.hole_mask()
        for p in node_list:
            pairs += 1
            i = (p.x + 1) * hy + (p.y + 1)
            e2 = -width - height - 2 + nw[i] + se[i]
            if e2 > best:
                best = e2
                arg = [(width, height, mask, p.x, p.y)]
            elif e2 == best:
                arg.append((width, height, mask, p.x, p.y))
    return shapes, pairs, best, arg


def _scan_task(args) -> tuple[int, int, int, list[tuple[int, int, int, int, int]]]:
    width, height, k, first_masks = args
    return _scan_shapes(width, height, k, first_masks)


def _load_checkpoint(path: str) -> dict[tuple[int, int], tuple]:
    import json

    done = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                doc = json.loads(line)
                done[(doc["w"], doc["h"])] = (
                    doc["shapes"],
                    doc["pairs"],
                    doc["best"],
                    [tuple(key) for key in doc["arg"]],
                )
    except FileNotFoundError:
        pass
    return done


def _append_checkpoint(path: str, slab: tuple[int, int], result: tuple) -> None:
    import json

    shapes_n, pairs_n, best, arg = result
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(
            json.dumps(
                {
                    "w": slab[0],
                    "h": slab[1],
                    "shapes": shapes_n,
                    "pairs": pairs_n,
                    "best": best,
                    "arg": [list(key) for key in arg],
                }
            )
            + "\n"
        )


def compute_ck(
    k: int, jobs: int = 1, budget: int | None = None, checkpoint: str | None = None
) -> CkResult:
    """Exact maximum of e_max over all (shape, node) pairs, with counts.

    A checkpoint file (newline-delimited completed-slab records) lets an
    interrupted k=7 run resume; it partitions the shape space by (W, H).
    """
    _check_budget(k, budget)
    if k < 2:
        raise BudgetExceededError("c_k is defined for k >= 2 (smaller k admit no node pairs)")
    slabs = [(w, h) for w in range(1, k + 1) for h in range(1, k + 1)]
    done = _load_checkpoint(checkpoint) if checkpoint else {}
    pending = [s for s in slabs if s not in done]
    results = [done[s] for s in slabs if s in done]
    if jobs > 1 and checkpoint is None:
        tasks = []
        for width, height in pending:
            full = (1 << width) - 1
            first = [m for m in range(1, full + 1) if bin(m).count("1") <= k - (height - 1)]
            step = max(1, len(first) // (2 * jobs))
            for i in range(0, len(first), step):
                tasks.append((width, height, k, first[i : i + step]))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results += list(pool.map(_scan_task, tasks))
    elif jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for slab, result in zip(
                pending, pool.map(_scan_task, [(w, h, k, None) for w, h in pending])
            ):
                _append_checkpoint(checkpoint, slab, result)
                results.append(result)
    else:
        for slab in pending:
            result = _scan_shapes(slab[0], slab[1], k)
            if checkpoint:
                _append_checkpoint(checkpoint, slab, result)
            results.append(result)

    shape_count = sum(r[0] for r in results)
    pair_count = sum(r[1] for r in results)
    best = max(r[2] for r in results)
    arg_keys = sorted(key for r in results if r[2] == best for key in r[3])
    if best < 0 or best % 2:
        raise AssertionError("no evaluable pairs or parity violation")
    argmax = tuple(
        (
            BarrierShape(
                width,
                height,
                frozenset(
                    Position(x, y)
                    for y in range(height)
                    for x in range(width)
                    if mask >> (y * width + x) & 1
                ),
            ),
            Position(px, py),
        )
        for width, height, mask, px, py in arg_keys
    )
    return CkResult(k, best // 2, shape_count, pair_count, len(arg_keys), argmax)


def ck_bounds(k: int) -> tuple[int, int]:
    """Analytic (lower, upper) bounds k-2 <= c_k <= k^2 + 4k, for k >= 3."""
    if k < 3:
        raise ValueError(f"bounds hold for k >= 3, got {k}")
    return k - 2, k * k + 4 * k


def h_threshold(k: int) -> int:
    """Smallest w for which the worst-case time 2w + c_k is exact."""
    return -(-(k * k + 7 * k + 5) // 2)  # ceil((k^2+7k+5)/2)


def h_kw(k: int, w: int, jobs: int = 1, budget: int | None = None) -> int | None:
    """2w + c_k when w is above the exactness threshold, else None (unknown)."""
    if k < 2:
        raise ValueError(f"h_kw needs k >= 2, got {k}")
    if 2 * w < k * k + 7 * k + 5:
        return None
    return 2 * w + compute_ck(k, jobs=jobs, budget=budget).c_k
