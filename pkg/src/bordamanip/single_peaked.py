"""Manipulation when every vote must be single-peaked on a fixed axis.

The axis (harmonious order) lists all candidates, the distinguished one
included.  A vote is coincident with the axis iff each of its top segments
occupies a contiguous stretch of the axis, so a coincident vote is built
top-down by growing a block one axis neighbour at a time.  Both greedy
solvers below work this way, with the distinguished candidate on top.

Slots follow the greedy's own bookkeeping: slot ``s`` is position
``n + 1 - s`` where ``n`` is the number of non-distinguished candidates,
so after placing a block of size ``s`` the next free position is slot ``s``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from .election import (
    InputError,
    ManipulationInstance,
    SolveOutcome,
    Vote,
    base_scores,
    verify_manipulation,
)

logger = logging.getLogger(__name__)

LEFT, RIGHT = 0, 1


@dataclass(frozen=True)
class HarmoniousOrder:
    """Axis over all candidates; ``axis[k]`` is the candidate at axis slot ``k + 1``."""

    axis: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "axis", tuple(self.axis))
        if sorted(self.axis) != list(range(len(self.axis))):
            raise InputError(f"axis is not a permutation of 0..{len(self.axis) - 1}")
        index = [0] * len(self.axis)
        for k, c in enumerate(self.axis):
            index[c] = k
        object.__setattr__(self, "_index", tuple(index))

    @classmethod
    def from_positions(cls, position: Sequence[int]) -> "HarmoniousOrder":
        """Build from ``position[c]`` = 1-based axis slot of candidate ``c``."""
        axis = [0] * len(position)
        for c, pos in enumerate(position):
            axis[pos - 1] = c
        return cls(tuple(axis))

    def __len__(self) -> int:
        return len(self.axis)

    @property
    def index(self) -> tuple[int, ...]:
        """0-based axis slot of each candidate."""
        return self._index

    @property
    def position(self) -> tuple[int, ...]:
        return tuple(k + 1 for k in self._index)

    def flanks(self, p: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Candidates left and right of ``p``, each listed nearest first."""
        k = self._index[p]
        return tuple(reversed(self.axis[:k])), self.axis[k + 1 :]


class SafePlacement(NamedTuple):
    candidate: int
    slot: int
    mode: str  # "single" or "pair"
    manipulator: int | None = None


def _check_roster(vote: Sequence[int], order: HarmoniousOrder) -> None:
    if len(vote) != len(order):
        raise InputError(f"vote over {len(vote)} candidates, axis over {len(order)}")


def is_coincident(vote: Sequence[int], order: HarmoniousOrder) -> bool:
    """True iff every top segment of ``vote`` is contiguous on the axis."""
    _check_roster(vote, order)
    idx = order.index
    lo = hi = None
    for count, c in enumerate(sorted(range(len(vote)), key=lambda c: -vote[c]), start=1):
        k = idx[c]
        lo = k if lo is None else min(lo, k)
        hi = k if hi is None else max(hi, k)
        if hi - lo + 1 != count:
            return False
    return True


def block_neighbors(block, order: HarmoniousOrder) -> set[int]:
    """Axis neighbours of a non-empty contiguous block of candidates."""
    block = set(block)
    if not block:
        raise ValueError("block must be non-empty")
    slots = [order.index[c] for c in block]
    lo, hi = min(slots), max(slots)
    if hi - lo + 1 != len(block):
        raise ValueError("candidates do not lie consecutively on the axis")
    out = set()
    if lo > 0:
        out.add(order.axis[lo - 1])
    if hi < len(order) - 1:
        out.add(order.axis[hi + 1])
    return out


def enumerate_coincident_votes(order: HarmoniousOrder) -> Iterator[Vote]:
    """Yield each vote coincident with ``order`` once (``2**(k-1)`` in total)."""
    axis = order.axis
    k = len(axis)
    ranking: list[int] = []

    def grow(lo: int, hi: int):
        if lo == 0 and hi == k - 1:
            yield Vote.from_ranking(ranking)
            return
        if lo > 0:
            ranking.append(axis[lo - 1])
            yield from grow(lo - 1, hi)
            ranking.pop()
        if hi < k - 1:
            ranking.append(axis[hi + 1])
            yield from grow(lo, hi + 1)
            ranking.pop()

    for peak in range(k):
        ranking.append(axis[peak])
        yield from grow(peak, peak)
        ranking.pop()


class _Block:
    """Contiguous axis interval with O(1) neighbour lookup."""

    def __init__(self, order: HarmoniousOrder, c: int):
        self.order = order
        self.lo = self.hi = order.index[c]

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def neighbor(self, side: int) -> int | None:
        if side == LEFT:
            return self.order.axis[self.lo - 1] if self.lo > 0 else None
        return self.order.axis[self.hi + 1] if self.hi < len(self.order) - 1 else None

    def neighbors(self) -> list[tuple[int, int]]:
        """``(side, candidate)`` pairs, left side first."""
        return [(s, c) for s in (LEFT, RIGHT) if (c := self.neighbor(s)) is not None]

    def add(self, c: int) -> None:
        k = self.order.index[c]
        if k == self.lo - 1:
            self.lo = k
        elif k == self.hi + 1:
            self.hi = k
        else:
            raise AssertionError("extension is not adjacent to the block")

    def full(self) -> bool:
        return len(self) == len(self.order)

    def same(self, other: "_Block") -> bool:
        return self.lo == other.lo and self.hi == other.hi


def _prepare(instance: ManipulationInstance, order: HarmoniousOrder, t: int):
    if instance.t != t or not instance.is_unit_weight:
        raise ValueError(f"this solver needs exactly {t} unit-weight manipulator(s)")
    if len(order) != instance.m_total:
        raise InputError(f"axis over {len(order)} candidates, election has {instance.m_total}")
    for k, (vote, _) in enumerate(instance.base_votes):
        if not is_coincident(vote, order):
            raise InputError(f"base vote {k} is not single-peaked on the given axis")
    return base_scores(instance)


def solve_ubm1sp(instance: ManipulationInstance, order: HarmoniousOrder) -> SolveOutcome:
    """One manipulator: fill positions top-down with a safe axis neighbour of the placed block."""
    scores = _prepare(instance, order, 1)
    p = instance.distinguished
    n = instance.m_total - 1
    target = scores[p] + n  # final score of p
    vote = [0] * instance.m_total
    vote[p] = n + 1
    block = _Block(order, p)
    steps: list[SafePlacement] = []
    while not block.full():
        slot = len(block)
        pos = n + 1 - slot
        safe = [(s, c) for s, c in block.neighbors() if scores[c] + pos - 1 < target]
        if not safe:
            return SolveOutcome(False, None, {"states_stored": 0, "extends": len(steps)})
        # tightest capacity first, left flank on ties
        side, c = min(safe, key=lambda sc: (target - scores[sc[1]] - 1, sc[0]))
        vote[c] = pos
        block.add(c)
        steps.append(SafePlacement(c, slot, "single", 0))
    votes = (Vote(vote),)
    assert verify_manipulation(instance, votes) and is_coincident(votes[0], order)
    return SolveOutcome(True, votes, {"states_stored": 0, "extends": len(steps)})


class _TwoVoteGreedy:
    def __init__(self, instance: ManipulationInstance, order: HarmoniousOrder, scores: list[int]):
        self.order = order
        self.scores = scores
        p = instance.distinguished
        self.n = instance.m_total - 1
        self.target = scores[p] + 2 * self.n
        self.votes = [[0] * instance.m_total, [0] * instance.m_total]
        self.blocks = [_Block(order, p), _Block(order, p)]
        for v in self.votes:
            v[p] = self.n + 1
        self.steps: list[SafePlacement] = []
        self.counts = {"lockstep": 0, "diverge": 0, "gap_fill": 0, "rejoin": 0}

    def next_free(self, i: int) -> int:
        return self.n + 1 - len(self.blocks[i])

    def safe(self, c: int, pos: int, other: int) -> bool:
        """Can ``c`` take ``pos`` in one vote given its place (if any) in vote ``other``?"""
        q = self.votes[other][c]
        extra = q - 1 if q else 0
        return self.scores[c] + (pos - 1) + extra < self.target

    def pair_safe(self, c: int, pos: int) -> bool:
        return self.scores[c] + 2 * (pos - 1) < self.target

    def extend(self, i: int, c: int, mode: str) -> None:
        slot = len(self.blocks[i])
        self.votes[i][c] = self.n + 1 - slot
        self.blocks[i].add(c)
        self.steps.append(SafePlacement(c, slot, mode, i))

    def run(self) -> bool:
        b1, b2 = self.blocks
        while not b1.full():
            assert b1.same(b2)
            pos = self.next_free(0)
            nbrs = b1.neighbors()
            pair = [(s, c) for s, c in nbrs if self.pair_safe(c, pos)]
            if pair:
                _, c = min(pair, key=lambda sc: (self.target - self.scores[sc[1]] - 1, sc[0]))
                self.extend(0, c, "pair")
                self.extend(1, c, "pair")
                self.counts["lockstep"] += 1
                continue
            if len(nbrs) == 1:
                return False
            (_, left), (_, right) = nbrs
            if not (self.safe(left, pos, 1) and self.safe(right, pos, 0)):
                return False
            self.extend(0, left, "single")
            self.extend(1, right, "single")
            self.counts["diverge"] += 1
            if not self.resync():
                return False
        return True

    def resync(self) -> bool:
        b1, b2 = self.blocks
        while not b1.same(b2):
            lo, hi = max(b1.lo, b2.lo), min(b1.hi, b2.hi)
            c = v = None
            for k in (lo - 1, hi + 1):  # left flank first
                if not 0 <= k < len(self.order):
                    continue
                cand = self.order.axis[k]
                placed = [i for i in (0, 1) if self.votes[i][cand]]
                if len(placed) == 1:
                    c, v = cand, placed[0]
                    break
            assert c is not None, "blocks differ but no one-sided neighbour exists"
            z = 1 - v
            start = self.next_free(z)
            while not self.safe(c, self.next_free(z), v):
                rest = [x for _, x in self.blocks[z].neighbors() if x != c]
                if not rest:
                    return False
                c2 = rest[0]
                if not self.safe(c2, self.next_free(z), v):
                    return False
                self.extend(z, c2, "single")
                self.counts["gap_fill"] += 1
            slot_pos = min(self.target - self.scores[c] - self.votes[v][c] + 1, start)
            assert self.next_free(z) == slot_pos
            self.extend(z, c, "single")
            self.counts["rejoin"] += 1
        return True


def solve_ubm2sp(instance: ManipulationInstance, order: HarmoniousOrder) -> SolveOutcome:
    """Two manipulators: grow both blocks in lockstep, diverging and re-joining when needed."""
    scores = _prepare(instance, order, 2)
    greedy = _TwoVoteGreedy(instance, order, scores)
    ok = greedy.run()
    n_extend = len(greedy.steps)
    assert n_extend <= 2 * instance.m_total
    stats = {"states_stored": 0, "extends": n_extend, **greedy.counts}
    if not ok:
        return SolveOutcome(False, None, stats)
    votes = tuple(Vote(v) for v in greedy.votes)
    assert verify_manipulation(instance, votes)
    assert all(is_coincident(v, order) for v in votes)
    return SolveOutcome(True, votes, stats)
