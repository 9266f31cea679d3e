"""Weighted Borda manipulation by dynamic programming over subsets.

Every manipulator puts the distinguished candidate ``p`` on top, which
leaves positions ``1..n`` for the ``n`` other candidates.  A table key is
``(C, Z_1, ..., Z_t)`` encoded as bitmasks: ``C`` is a set of placed
candidates (bit ``k`` = k-th non-``p`` candidate) and ``Z_i`` the positions
manipulator ``i`` used for them (bit ``j-1`` = position ``j``).  A key is
stored only if it is reachable, i.e. the candidates of ``C`` fit into those
positions without any of them exceeding its capacity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import IO

from .election import (
    Infeasible,
    ManipulationInstance,
    ResourceLimitError,
    SolveOutcome,
    Vote,
    base_scores,
    capacities,
    is_strict_winner,
    verify_manipulation,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_STATES = 2**26


@dataclass
class WbmTable:
    """Reachable entries of the subset table, one dict per layer.

    ``layers[l]`` maps each reachable key with ``|C| = l`` to its parent
    ``(predecessor key, c, z, perm)``: ``c`` is the local candidate index
    added last, ``z[r]`` its position for raw manipulator ``r`` and ``perm``
    the manipulator permutation applied when canonicalizing (identity unless
    symmetry pruning is on).
    """

    instance: ManipulationInstance
    weights: tuple[int, ...]
    capacity: tuple[int, ...]
    layers: list[dict]

    @property
    def n(self) -> int:
        return len(self.capacity)

    @property
    def t(self) -> int:
        return len(self.weights)

    @property
    def states_stored(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def full_key(self) -> tuple[int, ...]:
        full = (1 << self.n) - 1
        return (full,) * (self.t + 1)

    def is_yes(self) -> bool:
        return len(self.layers) == self.n + 1 and self.full_key() in self.layers[self.n]


def _safe_tuples(free: list[list[int]], weights, budget: int):
    """Yield position tuples (one per manipulator, from ``free``) whose weighted cost fits ``budget``.

    Positions are ascending within each list so the cost is monotone and the
    inner loops can stop early.
    """
    t = len(free)
    chosen = [0] * t

    def rec(i: int, cost: int):
        if i == t:
            yield tuple(chosen)
            return
        w = weights[i]
        for z in free[i]:
            c2 = cost + w * (z - 1)
            if c2 > budget:
                break
            chosen[i] = z
            yield from rec(i + 1, c2)

    yield from rec(0, 0)


def _symmetry_groups(weights) -> list[list[int]]:
    groups: dict[int, list[int]] = {}
    for i, w in enumerate(weights):
        groups.setdefault(w, []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def build_table(
    instance: ManipulationInstance,
    max_states: int = DEFAULT_MAX_STATES,
    symmetry: bool = False,
) -> WbmTable:
    """Fill the layered table.  Raises :class:`Infeasible` on negative capacity."""
    cap_map = capacities(instance)
    others = instance.others
    n = len(others)
    weights = instance.manipulator_weights
    t = len(weights)
    capacity = tuple(cap_map[c] for c in others)
    groups = _symmetry_groups(weights) if symmetry else []
    identity = tuple(range(t))

    positions = list(range(1, n + 1))
    start = (0,) * (t + 1)
    layers: list[dict] = [{start: None}]
    stored = 1
    for layer in range(1, n + 1):
        prev = layers[-1]
        cur: dict = {}
        for key in prev:
            cmask = key[0]
            free = [[z for z in positions if not key[i + 1] >> (z - 1) & 1] for i in range(t)]
            for c in range(n):
                if cmask >> c & 1:
                    continue
                for z in _safe_tuples(free, weights, capacity[c]):
                    raw = [cmask | 1 << c]
                    raw.extend(key[i + 1] | 1 << (z[i] - 1) for i in range(t))
                    perm = identity
                    if groups:
                        perm_l = list(identity)
                        for g in groups:
                            order = sorted(g, key=lambda r: raw[r + 1])
                            for slot, r in zip(g, order):
                                perm_l[slot] = r
                        perm = tuple(perm_l)
                        new_key = (raw[0],) + tuple(raw[perm[k] + 1] for k in range(t))
                    else:
                        new_key = tuple(raw)
                    parent = cur.get(new_key)
                    if parent is None:
                        stored += 1
                        if stored > max_states:
                            raise ResourceLimitError(
                                f"subset table exceeded {max_states} stored entries"
                            )
                        cur[new_key] = (key, c, z, perm)
                    elif (c, z) < (parent[1], parent[2]):
                        cur[new_key] = (key, c, z, perm)
        layers.append(cur)
        logger.debug("layer %d: %d reachable entries", layer, len(cur))
        if not cur:
            break
    return WbmTable(instance, weights, capacity, layers)


def reconstruct_wbm(table: WbmTable) -> list[Vote]:
    """Walk parent pointers back from the full key and assemble the votes."""
    if not table.is_yes():
        raise RuntimeError("reconstruction requested on a table without a full reachable entry")
    instance = table.instance
    others = instance.others
    n, t = table.n, table.t
    positions = [[0] * instance.m_total for _ in range(t)]
    for i in range(t):
        positions[i][instance.distinguished] = n + 1

    sigma = list(range(t))
    key = table.full_key()
    for layer in range(n, 0, -1):
        pred, c, z, perm = table.layers[layer][key]
        inv = [0] * t
        for k, r in enumerate(perm):
            inv[r] = k
        for r in range(t):
            positions[sigma[inv[r]]][others[c]] = z[r]
        sigma = [sigma[inv[r]] for r in range(t)]
        key = pred
    return [Vote(p) for p in positions]


def dump_table(table: WbmTable, out: IO[str]) -> None:
    """Write reachable entries, one per line: ``layer C Z_1 .. Z_t 1``.

    Sets are written as ``{a,b}`` with candidate names for ``C`` and
    1-based positions for each ``Z_i``.
    """
    names = [table.instance.candidates[c] for c in table.instance.others]

    def members(mask: int, labels) -> str:
        return "{" + ",".join(str(labels[k]) for k in range(len(labels)) if mask >> k & 1) + "}"

    pos_labels = list(range(1, table.n + 1))
    for layer, entries in enumerate(table.layers):
        for key in entries:
            parts = [str(layer), members(key[0], names)]
            parts.extend(members(zm, pos_labels) for zm in key[1:])
            parts.append("1")
            out.write(" ".join(parts) + "\n")


def solve_wbm(
    instance: ManipulationInstance,
    max_states: int = DEFAULT_MAX_STATES,
    symmetry: bool = False,
    dump: IO[str] | None = None,
) -> SolveOutcome:
    """Decide weighted Borda manipulation exactly and return a certificate on YES."""
    p = instance.distinguished
    if instance.t == 0:
        if is_strict_winner(base_scores(instance), p):
            return SolveOutcome(True, (), {"states_stored": 0})
        return SolveOutcome(False, None, {"states_stored": 0})
    try:
        table = build_table(instance, max_states=max_states, symmetry=symmetry)
    except Infeasible as exc:
        logger.debug("infeasible: %s", exc)
        return SolveOutcome(False, None, {"states_stored": 0, "infeasible_candidate": exc.candidate})
    if dump is not None:
        dump_table(table, dump)
    stats = {"states_stored": table.states_stored}
    if not table.is_yes():
        return SolveOutcome(False, None, stats)
    votes = reconstruct_wbm(table)
    if not verify_manipulation(instance, votes):
        raise AssertionError("reconstructed votes fail verification")
    return SolveOutcome(True, tuple(votes), stats)
