"""Exhaustive deciders used as ground truth for the solvers.

These are deliberately naive: they enumerate complete votes (any candidate
may be on top) or complete matrices and check the defining condition.  They
share nothing with the solvers except the election model and, for the
single-peaked oracle, the enumeration of coincident votes.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .election import (
    ManipulationInstance,
    ResourceLimitError,
    SolveOutcome,
    Vote,
    base_scores,
    is_strict_winner,
)
from .fmm import FmmInstance
from .single_peaked import HarmoniousOrder, enumerate_coincident_votes

DEFAULT_CAP = 10**7


def _first_winning_tuple(instance: ManipulationInstance, votes: np.ndarray):
    """Search ``votes`` (shape ``(k, m)``, position vectors) for the first winning t-tuple.

    Tuples are visited in lexicographic order of vote indices.  The last two
    manipulators are handled with numpy broadcasting, the rest by looping.
    """
    weights = instance.manipulator_weights
    t = len(weights)
    p = instance.distinguished
    base = np.asarray(base_scores(instance), dtype=np.int64)
    pts = votes.astype(np.int64) - 1  # (k, m)
    k = len(votes)
    others = [c for c in range(instance.m_total) if c != p]

    def wins(total):  # total (..., m)
        return total[..., p] > total[..., others].max(axis=-1) if others else np.ones(total.shape[:-1], bool)

    if t == 0:
        return () if is_strict_winner(base.tolist(), p) else None
    tail = min(t, 2)
    head = t - tail
    for prefix in itertools.product(range(k), repeat=head):
        acc = base.copy()
        for idx, w in zip(prefix, weights):
            acc = acc + w * pts[idx]
        if tail == 1:
            total = acc + weights[-1] * pts  # (k, m)
        else:
            total = acc + weights[-2] * pts[:, None, :] + weights[-1] * pts[None, :, :]
        hit = wins(total)
        if hit.any():
            flat = int(np.argmax(hit.reshape(-1)))
            rest = np.unravel_index(flat, hit.shape)
            return tuple(prefix) + tuple(int(r) for r in rest)
    return None


def brute_wbm(instance: ManipulationInstance, cap: int = DEFAULT_CAP) -> SolveOutcome:
    """Try every t-tuple of full votes; certificate is the lexicographically first winner."""
    m = instance.m_total
    t = instance.t
    size = math.factorial(m) ** t
    if size > cap:
        raise ResourceLimitError(f"{size} vote tuples exceed the oracle cap {cap}")
    perms = np.array(list(itertools.permutations(range(1, m + 1))), dtype=np.int64)
    hit = _first_winning_tuple(instance, perms)
    if hit is None:
        return SolveOutcome(False, None, {"searched": size})
    return SolveOutcome(True, tuple(Vote(perms[k].tolist()) for k in hit), {"searched": size})


def brute_fmm(instance: FmmInstance, cap: int = DEFAULT_CAP):
    """Search all matrices with entries in ``0..t``.

    Rows failing their own sum or weighted cap are dropped before combining,
    which leaves the search exhaustive over every candidate matrix.  Matrices
    are visited in descending lexicographic order of their flattened entries
    and the first feasible one is returned, or ``None``.
    """
    m, t = instance.m, instance.t
    rows_per_i = []
    for i in range(m):
        ok = [
            r
            for r in itertools.product(range(t, -1, -1), repeat=m)
            if sum(r) == t and sum(j * x for j, x in enumerate(r)) <= instance.g[i]
        ]
        rows_per_i.append(ok)
    size = math.prod(len(r) for r in rows_per_i)
    if size > cap:
        raise ResourceLimitError(f"{size} matrices exceed the oracle cap {cap}")
    for M in itertools.product(*rows_per_i):
        if all(sum(M[i][j] for i in range(m)) == t for j in range(m)):
            return tuple(M)
    return None


def brute_sp(instance: ManipulationInstance, order: HarmoniousOrder, cap: int = DEFAULT_CAP) -> SolveOutcome:
    """Try every tuple of votes coincident with ``order`` (t = 1 or 2)."""
    t = instance.t
    if t not in (1, 2):
        raise ValueError("single-peaked oracle supports one or two manipulators")
    k = instance.m_total
    size = 2 ** ((k - 1) * t)
    if size > cap:
        raise ResourceLimitError(f"{size} coincident vote tuples exceed the oracle cap {cap}")
    votes = np.array([list(v) for v in enumerate_coincident_votes(order)], dtype=np.int64)
    hit = _first_winning_tuple(instance, votes)
    if hit is None:
        return SolveOutcome(False, None, {"searched": size})
    return SolveOutcome(True, tuple(Vote(votes[i].tolist()) for i in hit), {"searched": size})


def is_coincident_by_triples(vote, order: HarmoniousOrder) -> bool:
    """Check single-peakedness straight from the three-candidate definition."""
    k = len(vote)
    L = order.position
    for a, b, c in itertools.permutations(range(k), 3):
        if L[a] < L[b] < L[c] or L[c] < L[b] < L[a]:
            if vote[c] > vote[b] and not vote[b] > vote[a]:
                return False
    return True
