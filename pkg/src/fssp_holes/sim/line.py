"""Minimal-time synchronizer for a line of cells (general at the left end).

Divide-to-halves construction realized with local signals:

* every general, at its creation, emits into each open direction a fast
  signal (speed 1) and a family of slow signals of speeds 1/(2^level - 1)
  for level = 2, 3, ..., each family member duplicated with a one-step
  sibling offset (the offset pads the odd-length rounding cases);
* a fast signal hitting the closed end turns that cell into a general
  (the reflection is the new general's own fast signal);
* a fast signal meeting an oncoming slow signal turns the meeting cell into
  a general and consumes the slow; when the fast signal's age and the slow
  signal's travel count have odd parity sum, the cell the fast signal just
  left becomes a general as well (the double general of odd splits);
* a cell fires one step after it and both its line neighbors are generals.

All cells fire simultaneously at start_time + 2n - 2.  A singleton line
fires at its activation instant (2*1 - 2 = 0 steps later).

The engine is event-driven but synchronous: every state change at t+1 is
caused by a token or general event in the cell's own neighborhood at t,
which is also what the quiescence check asserts.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class _Fast:
    cell: int
    dir: int
    birth: int
    alive: bool = True


@dataclass
class _Slow:
    cell: int  # current cell (origin general until first move)
    dir: int
    level: int
    birth: int
    moves: int = 0
    next_move: int = 0
    alive: bool = True
    visible: bool = False


@dataclass
class LineRun:
    """Outcome of one line synchronization."""

    n: int
    start_time: int
    births: list[int]
    fire_times: list[int]

    @property
    def fire_time(self) -> int:
        return self.fire_times[0]


class LineSynchronizer:
    """Event-driven run of the divide-to-halves line automaton."""

    def __init__(self, n: int, start_time: int = 0, quiescence_check: bool = True):
        if n < 1:
            raise ValueError(f"line length must be >= 1, got {n}")
        self.n = n
        self.t0 = start_time
        self.horizon = start_time + 2 * n + 4
        self.births: list[int | None] = [None] * n
        self.fasts: list[_Fast] = []
        self.slows: list[_Slow] = []
        self.slow_at: dict[int, list[_Slow]] = {}
        self.move_schedule: dict[int, list[_Slow]] = {}
        self.gen_count = 0
        self.quiescence_check = quiescence_check
        self._active_now: set[int] = set()

    # -- emissions ---------------------------------------------------------

    def _make_general(self, cell: int, t: int) -> None:
        if self.births[cell] is not None:
            return
        self.births[cell] = t
        self.gen_count += 1
        for s in self.slow_at.pop(cell, []):
            s.alive = False  # slows arriving at a general are absorbed
        for e in (-1, 1):
            nbr = cell + e
            if not (0 <= nbr < self.n) or self.births[nbr] is not None:
                continue
            self.fasts.append(_Fast(cell, e, t))
            level = 2
            while True:
                dwell = (1 << level) - 1
                if t + dwell > self.horizon:
                    break
                for off in (0, 1):
                    first = t + off + dwell
                    if first <= self.horizon:
                        self.slows.append(
                            _Slow(cell, e, level, t + off, 0, first)
                        )
                        self.move_schedule.setdefault(first, []).append(self.slows[-1])
                level += 1

    # -- stepping ----------------------------------------------------------

    def _assert_caused(self, cell: int) -> None:
        # Quiescence: a change at cell must have a non-quiescent neighborhood
        # one step earlier (a token or general at the cell or a neighbor).
        if not self.quiescence_check:
            return
        nbhd = {cell - 1, cell, cell + 1}
        if not nbhd & self._active_now:
            raise AssertionError(
                f"state change at cell {cell} without activity in its neighborhood"
            )

    def run(self) -> LineRun:
        if self.n == 1:
            # A lone general has nothing to synchronize with: 2n-2 = 0.
            self.births[0] = self.t0
            return LineRun(1, self.t0, [self.t0], [self.t0])

        self._active_now = {0}
        self._make_general(0, self.t0)
        t = self.t0
        while self.gen_count < self.n:
            if t > self.horizon:
                raise AssertionError("line synchronizer exceeded its horizon")
            self._step(t)
            t += 1
        births = [b for b in self.births if b is not None]
        assert len(births) == self.n
        fires = [
            1 + max(births[j] for j in (i - 1, i, i + 1) if 0 <= j < self.n)
            for i in range(self.n)
        ]
        return LineRun(self.n, self.t0, births, fires)

    def _step(self, t: int) -> None:
        # Activity snapshot at time t, for the quiescence check.
        if self.quiescence_check:
            act: set[int] = set()
            act.update(i for i, b in enumerate(self.births) if b is not None)
            act.update(f.cell for f in self.fasts if f.alive)
            act.update(s.cell for s in self.slows if s.alive and s.visible)
            self._active_now = act

        arrived_f: dict[int, list[_Fast]] = {}
        new_gens: list[int] = []

        # Slow signals due to move at t+1.
        for s in self.move_schedule.pop(t + 1, []):
            if not s.alive:
                continue
            target = s.cell + s.dir
            if s.visible:
                bucket = self.slow_at.get(s.cell)
                if bucket is not None and s in bucket:
                    bucket.remove(s)
            if not (0 <= target < self.n):
                s.alive = False
                continue
            if self.births[target] is not None:
                s.alive = False  # absorbed by a general
                continue
            self._assert_caused(target)
            s.cell = target
            s.moves += 1
            s.visible = True
            s.next_move = s.next_move + ((1 << s.level) - 1)
            self.slow_at.setdefault(target, []).append(s)
            self.move_schedule.setdefault(s.next_move, []).append(s)

        # Fast signals move one cell.
        for f in self.fasts:
            if not f.alive:
                continue
            target = f.cell + f.dir
            if not (0 <= target < self.n):
                f.alive = False
                continue
            if self.births[target] is not None:
                f.alive = False  # absorbed by an established general
                continue
            self._assert_caused(target)
            f.cell = target
            arrived_f.setdefault(target, []).append(f)

        # General-creating events at t+1.
        for target, fs in arrived_f.items():
            for f in fs:
                if not f.alive:
                    continue
                beyond = target + f.dir
                if beyond < 0 or beyond >= self.n:
                    # Closed end: the arrival cell becomes a general.
                    new_gens.append(target)
                    f.alive = False
                    continue
                opposing = [
                    s for s in self.slow_at.get(target, []) if s.dir == -f.dir and s.alive
                ]
                if opposing:
                    parities = {(s.moves % 2) for s in opposing}
                    if len(parities) > 1:
                        raise AssertionError(
                            f"co-located oncoming slows with mixed parity at {target}"
                        )
                    new_gens.append(target)
                    parity = ((t + 1 - f.birth) + parities.pop()) % 2
                    if parity:
                        prev = target - f.dir
                        if 0 <= prev < self.n:
                            new_gens.append(prev)
                    for s in opposing:
                        s.alive = False
                        self.slow_at[target].remove(s)
                    f.alive = False

        for cell in new_gens:
            self._assert_caused(cell)
            self._make_general(cell, t + 1)

        self.fasts = [f for f in self.fasts if f.alive]
        if len(self.slows) > 64 * self.n + 64:
            self.slows = [s for s in self.slows if s.alive]


def run_line(n: int, start_time: int = 0, quiescence_check: bool = True) -> LineRun:
    """Synchronize an n-cell line and report per-cell general/firing times."""
    run = LineSynchronizer(n, start_time, quiescence_check).run()
    return run


def run_line_fssp(n: int, quiescence_check: bool = True) -> int:
    """Firing time of the n-cell line started at 0: exactly 2n - 2.

    Raises if the cells do not fire simultaneously.
    """
    run = run_line(n, 0, quiescence_check)
    times = set(run.fire_times)
    if len(times) != 1:
        raise AssertionError(f"non-simultaneous firing for n={n}: {sorted(times)}")
    return times.pop()
