"""Barriers: rectangles in which every row and every column contains a hole.

The maximal barriers of a configuration are computed by the splitting
algorithm (start from the full interior rectangle and repeatedly delete or
split on hole-free lines).  A deliberately naive enumeration oracle backs it
in tests.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import NotANodeError
from .grid import Configuration, Position, bfs_distance, mh_distance


@dataclass(frozen=True, order=True)
class Rect:
    """Inclusive rectangle [x0..x1] x [y0..y1]."""

    x0: int
    y0: int
    x1: int
    y1: int

    def __post_init__(self):
        if self.x0 > self.x1 or self.y0 > self.y1:
            raise ValueError(f"empty rectangle {self}")

    @property
    def width(self) -> int:
        return self.x1 - self.x0 + 1

    @property
    def height(self) -> int:
        return self.y1 - self.y0 + 1

    def contains(self, p: tuple[int, int]) -> bool:
        return self.x0 <= p[0] <= self.x1 and self.y0 <= p[1] <= self.y1

    def contains_rect(self, other: "Rect") -> bool:
        return (
            self.x0 <= other.x0
            and self.x1 >= other.x1
            and self.y0 <= other.y0
            and self.y1 >= other.y1
        )

    def cells(self) -> Iterable[Position]:
        for x in range(self.x0, self.x1 + 1):
            for y in range(self.y0, self.y1 + 1):
                yield Position(x, y)


def _holes_by_column(cfg: Configuration) -> dict[int, list[int]]:
    cols: dict[int, list[int]] = {}
    for h in sorted(cfg.holes):
        cols.setdefault(h.x, []).append(h.y)
    return cols


def _holes_by_row(cfg: Configuration) -> dict[int, list[int]]:
    rows: dict[int, list[int]] = {}
    for h in sorted(cfg.holes, key=lambda p: (p.y, p.x)):
        rows.setdefault(h.y, []).append(h.x)
    return rows


def _has_value_in(sorted_vals: list[int] | None, lo: int, hi: int) -> bool:
    if not sorted_vals:
        return False
    i = bisect_left(sorted_vals, lo)
    return i < len(sorted_vals) and sorted_vals[i] <= hi


def is_barrier(cfg: Configuration, rect: Rect) -> bool:
    """True iff every column and every row of rect contains a hole of cfg."""
    cols = _holes_by_column(cfg)
    rows = _holes_by_row(cfg)
    return all(
        _has_value_in(cols.get(x), rect.y0, rect.y1) for x in range(rect.x0, rect.x1 + 1)
    ) and all(
        _has_value_in(rows.get(y), rect.x0, rect.x1) for y in range(rect.y0, rect.y1 + 1)
    )


@lru_cache(maxsize=8192)
def maximal_barriers(cfg: Configuration) -> frozenset[Rect]:
    """All maximal barriers of cfg, via the splitting algorithm.

    Start from the interior rectangle [1..w-1]^2 and repeat: drop hole-free
    side-boundary lines, split on hole-free inner lines.  The result is
    unique; processing the lowest-index hole-free column first (then row)
    merely fixes the execution order.
    """
    if not cfg.holes or cfg.size < 2:
        return frozenset()
    cols = _holes_by_column(cfg)
    rows = _holes_by_row(cfg)
    work = [Rect(1, 1, cfg.size - 1, cfg.size - 1)]
    done: list[Rect] = []
    while work:
        r = work.pop()
        free_col = next(
            (x for x in range(r.x0, r.x1 + 1) if not _has_value_in(cols.get(x), r.y0, r.y1)),
            None,
        )
        if free_col is not None:
            if free_col == r.x0 or free_col == r.x1:
                if r.width > 1:
                    work.append(
                        Rect(r.x0 + 1, r.y0, r.x1, r.y1)
                        if free_col == r.x0
                        else Rect(r.x0, r.y0, r.x1 - 1, r.y1)
                    )
                # A 1-wide hole-free rectangle disappears entirely.
            else:
                work.append(Rect(r.x0, r.y0, free_col - 1, r.y1))
                work.append(Rect(free_col + 1, r.y0, r.x1, r.y1))
            continue
        free_row = next(
            (y for y in range(r.y0, r.y1 + 1) if not _has_value_in(rows.get(y), r.x0, r.x1)),
            None,
        )
        if free_row is not None:
            if free_row == r.y0 or free_row == r.y1:
                if r.height > 1:
                    work.append(
                        Rect(r.x0, r.y0 + 1, r.x1, r.y1)
                        if free_row == r.y0
                        else Rect(r.x0, r.y0, r.x1, r.y1 - 1)
                    )
            else:
                work.append(Rect(r.x0, r.y0, r.x1, free_row - 1))
                work.append(Rect(r.x0, free_row + 1, r.x1, r.y1))
            continue
        done.append(r)
    return frozenset(done)


def maximal_barriers_bruteforce(cfg: Configuration) -> frozenset[Rect]:
    """Enumeration oracle: all barrier rectangles, filtered to maximal ones.

    A barrier has at most k columns and k rows, and its boundary columns and
    rows each contain a hole, so candidate bounds range over hole coordinates.
    Intended for small instances (w <= 25, k <= 12).
    """
    if not cfg.holes:
        return frozenset()
    k = cfg.k
    hole_xs = sorted({h.x for h in cfg.holes})
    hole_ys = sorted({h.y for h in cfg.holes})
    barriers = []
    for i, x0 in enumerate(hole_xs):
        for x1 in hole_xs[i:]:
            if x1 - x0 >= k:
                break
            for j, y0 in enumerate(hole_ys):
                for y1 in hole_ys[j:]:
                    if y1 - y0 >= k:
                        break
                    r = Rect(x0, y0, x1, y1)
                    if is_barrier(cfg, r):
                        barriers.append(r)
    maximal = [
        r
        for r in barriers
        if not any(o != r and o.contains_rect(r) for o in barriers)
    ]
    return frozenset(maximal)


def sorted_barriers(rects: Iterable[Rect]) -> list[Rect]:
    """Canonical (x0, y0, x1, y1) ordering for reproducible output."""
    return sorted(rects, key=lambda r: (r.x0, r.y0, r.x1, r.y1))


def barrier_containing(cfg: Configuration, p: tuple[int, int]) -> Rect | None:
    """The maximal barrier containing position p, or None."""
    for r in maximal_barriers(cfg):
        if r.contains(p):
            return r
    return None


def corner_mh_access(cfg: Configuration, corner: tuple[int, int], v: tuple[int, int]) -> bool:
    """True iff v is reachable from the given corner at Manhattan distance.

    Guaranteed true whenever v lies in no maximal barrier.
    """
    w = cfg.size
    if tuple(corner) not in {(0, 0), (0, w), (w, 0), (w, w)}:
        raise NotANodeError(f"{tuple(corner)} is not a corner of the {w}-square")
    return bfs_distance(cfg, corner, v) == mh_distance(corner, v)
