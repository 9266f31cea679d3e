"""Unweighted Borda manipulation through magic matrices.

With unit weights only the number of manipulators putting candidate ``c_i``
at position ``j`` matters, so a YES instance corresponds to a magic matrix
with ``M[i][j]`` = that count.  :func:`matrix_to_votes` turns a matrix back
into concrete votes by filling positions from the top down and repairing
conflicts with a chain of same-position exchanges between two votes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .election import (
    Infeasible,
    ManipulationInstance,
    SolveOutcome,
    Vote,
    base_scores,
    capacities,
    is_strict_winner,
    verify_manipulation,
)
from .fmm import DEFAULT_MAX_STATES, FmmInstance, fill_table, matrix_from_table

logger = logging.getLogger(__name__)

UNPLACED = -1


@dataclass
class ConstructionTrace:
    """Instrumentation collected by :func:`matrix_to_votes`."""

    iterations: int = 0
    chains: list[int] = field(default_factory=list)
    donor_fills: int = 0


def reduce_ubm_to_fmm(instance: ManipulationInstance) -> FmmInstance:
    """Capacities of the non-distinguished candidates, in input order, as a matrix instance.

    Raises :class:`Infeasible` when some capacity is negative.
    """
    if not instance.is_unit_weight:
        raise ValueError("matrix reduction needs unit manipulator weights; use solve_wbm")
    cap = capacities(instance)
    return FmmInstance(tuple(cap[c] for c in instance.others), instance.t)


class _PartialVote:
    """Partial injection candidate -> position over ``m + 1`` slots."""

    def __init__(self, size: int):
        self.pos = [UNPLACED] * size
        self.occ = [None] * (size + 1)  # occ[j] = candidate at position j

    def place(self, c: int, j: int) -> None:
        assert self.pos[c] == UNPLACED and self.occ[j] is None
        self.pos[c] = j
        self.occ[j] = c

    def rebuild(self) -> None:
        self.pos = [UNPLACED] * len(self.pos)
        for j, c in enumerate(self.occ):
            if c is not None:
                assert self.pos[c] == UNPLACED, "partial vote is not injective"
                self.pos[c] = j

    def is_injective(self) -> bool:
        seen = [c for c in self.occ if c is not None]
        return len(seen) == len(set(seen))


def _check_matrix(M: Sequence[Sequence[int]], t: int) -> int:
    m = len(M)
    if m == 0 or any(len(row) != m for row in M):
        raise ValueError("matrix must be square and non-empty")
    if any(x < 0 for row in M for x in row):
        raise ValueError("matrix entries must be non-negative")
    if any(sum(row) != t for row in M):
        raise ValueError(f"every row must sum to {t}")
    if any(sum(M[i][j] for i in range(m)) != t for j in range(m)):
        raise ValueError(f"every column must sum to {t}")
    return m


def matrix_to_votes(
    M: Sequence[Sequence[int]], t: int, trace: ConstructionTrace | None = None
) -> list[Vote]:
    """Build ``t`` votes over ``m + 1`` candidates realizing the counts in ``M``.

    Candidate ``i`` (0-based) is the matrix row ``i``; candidate ``m`` is the
    distinguished one and sits on top (position ``m + 1``) in every vote.
    Exactly ``M[i][j-1]`` votes put candidate ``i`` at position ``j``.
    """
    m = _check_matrix(M, t)
    if trace is None:
        trace = ConstructionTrace()
    # remaining[i][j]: how many more votes must put c_i at position j
    remaining = [[0] + list(row) for row in M]
    votes = [_PartialVote(m + 1) for _ in range(t)]
    for v in votes:
        v.place(m, m + 1)

    for jbar in range(m, 0, -1):
        while True:
            z = next((k for k, v in enumerate(votes) if v.occ[jbar] is None), None)
            if z is None:
                break
            trace.iterations += 1
            i = next(i for i in range(m) if remaining[i][jbar] > 0)
            vz = votes[z]
            if vz.pos[i] == UNPLACED:
                vz.place(i, jbar)
                remaining[i][jbar] -= 1
                continue
            jp = vz.pos[i]
            zp = next(k for k, v in enumerate(votes) if v.pos[i] == UNPLACED)
            vzp = votes[zp]
            if vzp.occ[jbar] is None:
                vzp.place(i, jbar)
                remaining[i][jbar] -= 1
                trace.donor_fills += 1
                continue
            swaps = 0
            while True:
                x = vzp.occ[jp]
                jpp = next(
                    (j for j in range(jbar + 1, m + 2) if j != jp and vz.occ[j] == x), None
                )
                if jpp is None:
                    break
                vz.occ[jp], vzp.occ[jp] = vzp.occ[jp], vz.occ[jp]
                swaps += 1
                assert vzp.is_injective()
                jp = jpp
            vz.occ[jp], vzp.occ[jp] = vzp.occ[jp], vz.occ[jp]
            swaps += 1
            vz.rebuild()
            vzp.rebuild()
            assert vz.pos[i] == UNPLACED and vzp.pos[i] != UNPLACED
            vz.place(i, jbar)
            remaining[i][jbar] -= 1
            trace.chains.append(swaps)
            assert swaps <= 2 * m, "exchange chain longer than the path bound"
    assert trace.iterations == t * m
    assert all(x == 0 for row in remaining for x in row)
    return [Vote(v.pos) for v in votes]


def solve_ubm(
    instance: ManipulationInstance,
    max_states: int = DEFAULT_MAX_STATES,
    trace: ConstructionTrace | None = None,
) -> SolveOutcome:
    """Decide unweighted manipulation via the matrix table and build the votes."""
    if not instance.is_unit_weight:
        raise ValueError("solve_ubm needs unit manipulator weights; use solve_wbm")
    p = instance.distinguished
    t = instance.t
    if t == 0 or instance.m_total == 1:
        if is_strict_winner(base_scores(instance), p):
            return SolveOutcome(True, tuple(Vote((1,)) for _ in range(t)), {"states_stored": 0})
        return SolveOutcome(False, None, {"states_stored": 0})
    try:
        fmm = reduce_ubm_to_fmm(instance)
    except Infeasible as exc:
        return SolveOutcome(False, None, {"states_stored": 0, "infeasible_candidate": exc.candidate})
    layers = fill_table(fmm, max_states)
    stats = {"states_stored": sum(len(layer) for layer in layers)}
    M = matrix_from_table(fmm, layers)
    if M is None:
        return SolveOutcome(False, None, stats)
    local = matrix_to_votes(M, t, trace)
    others = instance.others
    votes = []
    for lv in local:
        pos = [0] * instance.m_total
        for i, c in enumerate(others):
            pos[c] = lv[i]
        pos[p] = lv[len(others)]
        votes.append(Vote(pos))
    if not verify_manipulation(instance, votes):
        raise AssertionError("constructed votes fail verification")
    stats["matrix"] = [list(row) for row in M]
    return SolveOutcome(True, tuple(votes), stats)
