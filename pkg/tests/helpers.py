"""Instance generators shared by the test modules."""

from __future__ import annotations

import random
from pathlib import Path

from bordamanip import HarmoniousOrder, ManipulationInstance, Vote
from bordamanip.single_peaked import enumerate_coincident_votes

DATA = Path(__file__).parent / "data"


def names(m: int) -> tuple[str, ...]:
    return tuple(f"c{k}" for k in range(m))


def random_vote(rng: random.Random, m: int) -> Vote:
    return Vote(rng.sample(range(1, m + 1), m))


def random_instance(
    rng: random.Random,
    m_total: int,
    n_votes: int,
    t: int,
    weights=(1,),
    p: int | None = None,
) -> ManipulationInstance:
    """Uniform base votes; base and manipulator weights drawn from ``weights``."""
    votes = [(random_vote(rng, m_total), rng.choice(weights)) for _ in range(n_votes)]
    manip = [rng.choice(weights) for _ in range(t)]
    if p is None:
        p = rng.randrange(m_total)
    return ManipulationInstance(names(m_total), p, votes, manip)


def outward_vote(rng: random.Random, order: HarmoniousOrder, p: int, left_first: bool) -> Vote:
    """Coincident vote that ranks a run of one flank above ``p``.

    Pairs of these (one per flank) push both axis neighbours of ``p`` up,
    which is what makes the two-vote greedy diverge.
    """
    left, right = (list(x) for x in order.flanks(p))
    if not left_first:
        left, right = right, left
    cut = len(left) if rng.random() < 0.6 else rng.randint(1, len(left))
    ranking = left[:cut] + [p]
    rest_a, rest_b = left[cut:], right
    while rest_a or rest_b:
        if rest_b and (not rest_a or rng.random() < 0.5):
            ranking.append(rest_b.pop(0))
        else:
            ranking.append(rest_a.pop(0))
    return Vote.from_ranking(ranking)


def random_sp_instance(rng: random.Random, k: int, t: int, n_votes: int) -> tuple:
    """Random axis, distinguished candidate and coincident base profile."""
    axis = list(range(k))
    rng.shuffle(axis)
    order = HarmoniousOrder(tuple(axis))
    pool = list(enumerate_coincident_votes(order))
    votes = [(rng.choice(pool), 1) for _ in range(n_votes)]
    p = rng.randrange(k)
    return ManipulationInstance(names(k), p, votes, (1,) * t), order


def targeted_sp_instance(rng: random.Random, k: int, t: int = 2) -> tuple:
    """Profile of mirrored outward votes around an interior ``p``, plus noise."""
    axis = list(range(k))
    rng.shuffle(axis)
    order = HarmoniousOrder(tuple(axis))
    p = axis[rng.randrange(1, k - 1)]
    votes = []
    for _ in range(rng.randint(1, 3)):
        votes.append((outward_vote(rng, order, p, True), 1))
        votes.append((outward_vote(rng, order, p, False), 1))
    if rng.random() < 0.5:
        votes.append((rng.choice(list(enumerate_coincident_votes(order))), 1))
    return ManipulationInstance(names(k), p, votes, (1,) * t), order


def random_magic_matrix(rng: random.Random, m: int, t: int) -> list[list[int]]:
    """Sum of ``t`` random permutation matrices (every such matrix is magic)."""
    M = [[0] * m for _ in range(m)]
    for _ in range(t):
        perm = rng.sample(range(m), m)
        for i, j in enumerate(perm):
            M[i][j] += 1
    return M


def position_counts(votes, m: int) -> list[list[int]]:
    """``counts[i][j-1]`` = number of votes putting local candidate ``i`` at ``j``."""
    counts = [[0] * m for _ in range(m)]
    for v in votes:
        for i in range(m):
            counts[i][v[i] - 1] += 1
    return counts
