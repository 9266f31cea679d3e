"""Election model: Borda scores over position vectors, plus certificate checking.

A vote is stored as a position vector: ``vote[c]`` is the position of
candidate ``c``, positions run ``1..m`` and ``m`` is the top choice.  The
candidate at position ``j`` earns ``j - 1`` points times the voter weight.
Rankings (names listed best to worst) only appear at the I/O boundary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)


class InputError(ValueError):
    """Malformed instance, vote, or input document."""


class ResourceLimitError(RuntimeError):
    """A configured state or enumeration cap was exceeded."""


class Infeasible(Exception):
    """Some candidate has negative capacity, so no manipulation exists."""

    def __init__(self, candidate: int, capacity: int):
        super().__init__(f"candidate {candidate} has capacity {capacity} < 0")
        self.candidate = candidate
        self.capacity = capacity


class Vote(tuple):
    """Position vector of one voter; ``vote[c]`` is in ``1..len(vote)``."""

    __slots__ = ()

    @classmethod
    def from_ranking(cls, ranking: Sequence[int]) -> "Vote":
        """Build a vote from candidate ids listed most to least preferred."""
        m = len(ranking)
        pos = [0] * m
        for rank, c in enumerate(ranking):
            pos[c] = m - rank
        return cls(pos)

    def ranking(self) -> list[int]:
        order = sorted(range(len(self)), key=lambda c: -self[c])
        return order

    def is_bijection(self) -> bool:
        return sorted(self) == list(range(1, len(self) + 1))


@dataclass(frozen=True)
class ManipulationInstance:
    """Election with a distinguished candidate and a manipulating coalition.

    ``base_votes`` holds ``(Vote, weight)`` pairs of the sincere voters and
    ``manipulator_weights`` one weight per manipulator.
    """

    candidates: tuple[str, ...]
    distinguished: int
    base_votes: tuple[tuple[Vote, int], ...] = ()
    manipulator_weights: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        object.__setattr__(
            self, "base_votes", tuple((Vote(v), int(w)) for v, w in self.base_votes)
        )
        object.__setattr__(
            self, "manipulator_weights", tuple(int(w) for w in self.manipulator_weights)
        )
        m = len(self.candidates)
        if m == 0:
            raise InputError("election has no candidates")
        if len(set(self.candidates)) != m:
            raise InputError("candidate names must be unique")
        if not 0 <= self.distinguished < m:
            raise InputError(f"distinguished candidate index {self.distinguished} out of range")
        for k, (vote, weight) in enumerate(self.base_votes):
            if len(vote) != m or not vote.is_bijection():
                raise InputError(f"base vote {k} is not a permutation of {m} positions")
            if weight < 0:
                raise InputError(f"base vote {k} has negative weight {weight}")
        for k, w in enumerate(self.manipulator_weights):
            if w < 0:
                raise InputError(f"manipulator {k} has negative weight {w}")

    @classmethod
    def unweighted(
        cls,
        candidates: Sequence[str],
        distinguished: int,
        votes: Iterable[Sequence[int]],
        t: int,
    ) -> "ManipulationInstance":
        """Unit-weight instance from position vectors."""
        return cls(tuple(candidates), distinguished, tuple((Vote(v), 1) for v in votes), (1,) * t)

    @property
    def m_total(self) -> int:
        return len(self.candidates)

    @property
    def t(self) -> int:
        return len(self.manipulator_weights)

    @property
    def others(self) -> tuple[int, ...]:
        """Non-distinguished candidate ids in input order."""
        p = self.distinguished
        return tuple(c for c in range(self.m_total) if c != p)

    @property
    def is_unit_weight(self) -> bool:
        return all(w == 1 for w in self.manipulator_weights)

    def with_manipulators(self, weights: Sequence[int]) -> "ManipulationInstance":
        return ManipulationInstance(self.candidates, self.distinguished, self.base_votes, tuple(weights))


@dataclass
class SolveOutcome:
    verdict: bool
    votes: tuple[Vote, ...] | None = None
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict and self.votes is None:
            raise ValueError("a YES outcome needs a certificate")
        if not self.verdict and self.votes is not None:
            raise ValueError("a NO outcome carries no certificate")


def _check_candidate(instance: ManipulationInstance, c: int) -> None:
    if not isinstance(c, int) or not 0 <= c < instance.m_total:
        raise InputError(f"unknown candidate {c!r}")


def borda_score(instance: ManipulationInstance, c: int) -> int:
    """Weighted Borda score of ``c`` from the base votes only."""
    _check_candidate(instance, c)
    return sum(w * (vote[c] - 1) for vote, w in instance.base_votes)


def base_scores(instance: ManipulationInstance) -> list[int]:
    scores = [0] * instance.m_total
    for vote, w in instance.base_votes:
        for c, pos in enumerate(vote):
            scores[c] += w * (pos - 1)
    return scores


def capacities(instance: ManipulationInstance) -> dict[int, int]:
    """Score budget each non-distinguished candidate may receive from the coalition.

    Assumes every manipulator ranks the distinguished candidate first, so
    its final score is its base score plus ``W * |C|``.  Raises
    :class:`Infeasible` for the first candidate with a negative budget.
    """
    if instance.t < 1:
        raise ValueError("capacities need at least one manipulator")
    scores = base_scores(instance)
    p = instance.distinguished
    n = instance.m_total - 1
    total_weight = sum(instance.manipulator_weights)
    cap = {}
    for c in instance.others:
        cap[c] = scores[p] + total_weight * n - scores[c] - 1
    for c in instance.others:
        if cap[c] < 0:
            raise Infeasible(c, cap[c])
    return cap


def combined_scores(instance: ManipulationInstance, votes: Sequence[Sequence[int]]) -> list[int]:
    """Scores after adding the manipulators' votes (weights applied)."""
    scores = base_scores(instance)
    for vote, w in zip(votes, instance.manipulator_weights):
        for c, pos in enumerate(vote):
            scores[c] += w * (pos - 1)
    return scores


def is_strict_winner(scores: Sequence[int], p: int) -> bool:
    return all(scores[p] > s for c, s in enumerate(scores) if c != p)


def verify_manipulation(instance: ManipulationInstance, votes: Sequence[Sequence[int]]) -> bool:
    """True iff ``votes`` are valid and make the distinguished candidate the unique top scorer."""
    if len(votes) != instance.t:
        logger.debug("expected %d manipulator votes, got %d", instance.t, len(votes))
        return False
    m = instance.m_total
    for k, vote in enumerate(votes):
        if len(vote) != m or sorted(vote) != list(range(1, m + 1)):
            logger.debug("manipulator vote %d is not a bijection: %r", k, vote)
            return False
    scores = combined_scores(instance, votes)
    ok = is_strict_winner(scores, instance.distinguished)
    if not ok:
        logger.debug("distinguished candidate not a strict winner: %r", scores)
    return ok
