"""Filling magic matrices.

Given capacities ``g_1..g_m`` and ``t``, find an ``m x m`` non-negative
integer matrix whose rows and columns all sum to ``t`` and whose row ``i``
satisfies ``sum_j (j-1) * M[i][j] <= g_i``.

The solver adds one row at a time.  A state after ``l`` rows is the tuple
of column sums so far; each reachable state remembers the lexicographically
smallest row that produced it, which makes the returned matrix
deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Sequence

from .election import InputError, ResourceLimitError

logger = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 2**26

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class FmmInstance:
    g: tuple[int, ...]
    t: int

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(x) for x in self.g))
        if len(self.g) < 1:
            raise InputError("need at least one row")
        if any(x < 0 for x in self.g):
            raise InputError(f"capacities must be non-negative: {self.g}")
        if self.t < 1:
            raise InputError(f"t must be positive, got {self.t}")

    @property
    def m(self) -> int:
        return len(self.g)


def enumerate_row_compositions(t: int, m: int, g_row: int) -> Iterator[tuple[int, ...]]:
    """Yield every ``r`` with ``r_j >= 0``, ``sum r = t`` and ``sum (j-1) r_j <= g_row``.

    Output is in ascending lexicographic order, each composition once.
    """
    row = [0] * m

    def rec(j: int, left: int, cost: int):
        if j == m - 1:
            if cost + j * left <= g_row:
                row[j] = left
                yield tuple(row)
            return
        for r in range(left + 1):
            # cheapest completion puts the rest in the next column
            if cost + j * r + (j + 1) * (left - r) > g_row:
                continue
            row[j] = r
            yield from rec(j + 1, left - r, cost + j * r)
        row[j] = 0

    if m == 1:
        if g_row >= 0:
            yield (t,)
        return
    yield from rec(0, t, 0)


def fill_table(instance: FmmInstance, max_states: int = DEFAULT_MAX_STATES) -> list[dict]:
    """Return the reachable column-load states per layer.

    ``layers[l]`` maps a load tuple (after ``l`` rows) to ``(previous load,
    row)``.  Construction stops early once a layer is empty.
    """
    m, t = instance.m, instance.t
    bound = (t + 1) ** m
    start = (0,) * m
    layers: list[dict] = [{start: None}]
    stored = 1
    for l in range(1, m + 1):
        rows = list(enumerate_row_compositions(t, m, instance.g[l - 1]))
        cur: dict = {}
        for load in layers[-1]:
            for row in rows:
                new = tuple(a + b for a, b in zip(load, row))
                if max(new) > t:
                    continue
                parent = cur.get(new)
                if parent is None:
                    stored += 1
                    if stored > max_states:
                        raise ResourceLimitError(f"matrix table exceeded {max_states} states")
                    cur[new] = (load, row)
                elif row < parent[1]:
                    cur[new] = (load, row)
        layers.append(cur)
        logger.debug("row %d: %d reachable loads", l, len(cur))
        assert all(sum(s) == l * t for s in cur)
        if not cur:
            break
    # loads in layer l sum to l*t, so layers never share a state
    assert stored <= bound
    return layers


def solve_fmm(instance: FmmInstance, max_states: int = DEFAULT_MAX_STATES) -> Matrix | None:
    """Return a magic matrix for ``instance`` or ``None`` if none exists."""
    layers = fill_table(instance, max_states)
    return matrix_from_table(instance, layers)


def matrix_from_table(instance: FmmInstance, layers: list[dict]) -> Matrix | None:
    m, t = instance.m, instance.t
    final = (t,) * m
    if len(layers) != m + 1 or final not in layers[m]:
        return None
    rows = []
    load = final
    for l in range(m, 0, -1):
        load, row = layers[l][load]
        rows.append(row)
    rows.reverse()
    M = tuple(rows)
    assert verify_matrix(M, instance)
    return M


def verify_matrix(M: Sequence[Sequence[int]], instance: FmmInstance) -> bool:
    m, t = instance.m, instance.t
    if len(M) != m or any(len(row) != m for row in M):
        return False
    for i, row in enumerate(M):
        if any(x < 0 for x in row) or sum(row) != t:
            return False
        if sum(j * x for j, x in enumerate(row)) > instance.g[i]:
            return False
    return all(sum(M[i][j] for i in range(m)) == t for j in range(m))


def export_ilp(instance: FmmInstance) -> str:
    """Feasibility model in CPLEX LP text format.

    Variables are ``x_i_j`` (1-based, row ``i``, column ``j``).  The layout
    is fixed so identical instances give identical bytes.
    """
    m, t = instance.m, instance.t
    idx = range(1, m + 1)

    def var(i: int, j: int) -> str:
        return f"x_{i}_{j}"

    lines = [
        "\\ filling magic matrix feasibility model",
        f"\\ m = {m}, t = {t}, g = {' '.join(str(x) for x in instance.g)}",
        "Minimize",
        f" obj: 0 {var(1, 1)}",
        "Subject To",
    ]
    for j in idx:
        lines.append(f" col_{j}: " + " + ".join(var(i, j) for i in idx) + f" = {t}")
    for i in idx:
        lines.append(f" row_{i}: " + " + ".join(var(i, j) for j in idx) + f" = {t}")
    for i in idx:
        terms = " + ".join(f"{j - 1} {var(i, j)}" for j in idx)
        lines.append(f" cap_{i}: {terms} <= {instance.g[i - 1]}")
    lines.append("Bounds")
    lines.extend(f" {var(i, j)} >= 0" for i in idx for j in idx)
    lines.append("General")
    lines.append(" " + " ".join(var(i, j) for i in idx for j in idx))
    lines.append("End")
    return "\n".join(lines) + "\n"
