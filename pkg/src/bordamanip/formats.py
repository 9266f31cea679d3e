"""Reading and writing election documents.

Two encodings are supported.  JSON is canonical::

    {"candidates": ["p", "a", "b"],
     "distinguished": "p",
     "votes": [{"ranking": ["a", "b", "p"], "weight": 1}],
     "manipulators": {"count": 2, "weights": [1, 1]},
     "harmonious_order": ["a", "p", "b"]}

The text profile is meant for hand-written fixtures.  Header lines are
``keyword: values`` and every other non-blank line is one ranking, best
first, optionally prefixed by ``<weight>:``::

    # comment
    candidates: p a b
    distinguished: p
    manipulators: 2
    weights: 1 1
    axis: a p b
    3: a b p
    b a p

A ranking lists names most to least preferred; the first name gets the top
position ``m``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .election import InputError, ManipulationInstance, Vote
from .single_peaked import HarmoniousOrder

HEADER_KEYS = ("candidates", "distinguished", "manipulators", "weights", "axis")


def _ranking_to_vote(ranking, index: dict[str, int], where: str) -> Vote:
    if not isinstance(ranking, list):
        raise InputError(f"{where}: ranking must be a list of names")
    seen = set()
    for name in ranking:
        if name not in index:
            raise InputError(f"{where}: unknown candidate {name!r}")
        if name in seen:
            raise InputError(f"{where}: duplicate candidate {name!r}")
        seen.add(name)
    missing = [c for c in index if c not in seen]
    if missing:
        raise InputError(f"{where}: ranking omits candidate {missing[0]!r}")
    return Vote.from_ranking([index[name] for name in ranking])


def _check_weight(w: Any, where: str) -> int:
    if isinstance(w, bool) or not isinstance(w, int):
        raise InputError(f"{where}: weight must be an integer, got {w!r}")
    if w < 0:
        raise InputError(f"{where}: negative weight {w}")
    return w


def election_from_dict(doc: dict) -> tuple[ManipulationInstance, HarmoniousOrder | None]:
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    names = doc.get("candidates")
    if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
        raise InputError("candidates: expected a non-empty list of names")
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise InputError(f"candidates: duplicate name {dup!r}")
    index = {name: k for k, name in enumerate(names)}
    p = doc.get("distinguished")
    if p is None:
        raise InputError("distinguished: missing")
    if p not in index:
        raise InputError(f"distinguished: {p!r} is not a candidate")

    votes = []
    for k, entry in enumerate(doc.get("votes", [])):
        where = f"votes[{k}]"
        if not isinstance(entry, dict) or "ranking" not in entry:
            raise InputError(f"{where}: expected an object with a ranking")
        vote = _ranking_to_vote(entry["ranking"], index, f"{where}.ranking")
        votes.append((vote, _check_weight(entry.get("weight", 1), f"{where}.weight")))

    manip = doc.get("manipulators")
    if not isinstance(manip, dict) or "count" not in manip:
        raise InputError("manipulators: expected an object with a count")
    count = manip["count"]
    if isinstance(count, bool) or not isinstance(count, int) or count < 0:
        raise InputError(f"manipulators.count: expected a non-negative integer, got {count!r}")
    weights = manip.get("weights")
    if weights is None:
        weights = [1] * count
    else:
        if not isinstance(weights, list) or len(weights) != count:
            raise InputError(f"manipulators.weights: expected {count} weights")
        weights = [_check_weight(w, f"manipulators.weights[{k}]") for k, w in enumerate(weights)]

    order = None
    axis = doc.get("harmonious_order")
    if axis is not None:
        if not isinstance(axis, list) or sorted(axis, key=str) != sorted(names, key=str):
            raise InputError("harmonious_order: must be a permutation of the candidates")
        order = HarmoniousOrder(tuple(index[name] for name in axis))
    return ManipulationInstance(tuple(names), index[p], tuple(votes), tuple(weights)), order


def election_to_dict(instance: ManipulationInstance, order: HarmoniousOrder | None = None) -> dict:
    names = instance.candidates
    doc: dict = {
        "candidates": list(names),
        "distinguished": names[instance.distinguished],
        "votes": [
            {"ranking": [names[c] for c in vote.ranking()], "weight": w}
            for vote, w in instance.base_votes
        ],
        "manipulators": {
            "count": instance.t,
            "weights": list(instance.manipulator_weights),
        },
    }
    if order is not None:
        doc["harmonious_order"] = [names[c] for c in order.axis]
    return doc


def parse_text(text: str) -> tuple[ManipulationInstance, HarmoniousOrder | None]:
    header: dict[str, tuple[int, list[str]]] = {}
    rankings: list[tuple[int, int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        head = head.strip()
        if sep and head in HEADER_KEYS:
            if head in header:
                raise InputError(f"line {lineno}: repeated '{head}:' header")
            header[head] = (lineno, rest.split())
            continue
        weight = 1
        if sep:
            try:
                weight = int(head)
            except ValueError:
                raise InputError(f"line {lineno}: unknown header or bad weight {head!r}") from None
            if weight < 0:
                raise InputError(f"line {lineno}: negative weight {weight}")
            line = rest
        rankings.append((lineno, weight, line.split()))

    for key in ("candidates", "distinguished", "manipulators"):
        if key not in header:
            raise InputError(f"missing '{key}:' header")
    names = header["candidates"][1]
    doc: dict = {"candidates": names}
    lineno, vals = header["distinguished"]
    if len(vals) != 1:
        raise InputError(f"line {lineno}: expected exactly one distinguished candidate")
    doc["distinguished"] = vals[0]
    lineno, vals = header["manipulators"]
    try:
        (count,) = [int(v) for v in vals]
    except ValueError:
        raise InputError(f"line {lineno}: expected one integer manipulator count") from None
    doc["manipulators"] = {"count": count}
    if "weights" in header:
        lineno, vals = header["weights"]
        try:
            doc["manipulators"]["weights"] = [int(v) for v in vals]
        except ValueError:
            raise InputError(f"line {lineno}: weights must be integers") from None
    if "axis" in header:
        doc["harmonious_order"] = header["axis"][1]

    # validate rankings here so errors point at the offending line
    try:
        instance, order = election_from_dict(doc)
    except InputError as exc:
        where = {"distinguished": "distinguished", "manipulators": "manipulators",
                 "harmonious_order": "axis", "candidates": "candidates"}
        key = str(exc).split(":", 1)[0].split(".", 1)[0]
        if key in where and where[key] in header:
            raise InputError(f"line {header[where[key]][0]}: {exc}") from None
        raise
    index = {name: k for k, name in enumerate(names)}
    votes = []
    for lineno, weight, ranking in rankings:
        votes.append((_ranking_to_vote(ranking, index, f"line {lineno}"), weight))
    instance = ManipulationInstance(
        instance.candidates, instance.distinguished, tuple(votes), instance.manipulator_weights
    )
    return instance, order


def election_to_text(instance: ManipulationInstance, order: HarmoniousOrder | None = None) -> str:
    names = instance.candidates
    lines = [
        "candidates: " + " ".join(names),
        "distinguished: " + names[instance.distinguished],
        f"manipulators: {instance.t}",
        "weights: " + " ".join(str(w) for w in instance.manipulator_weights),
    ]
    if order is not None:
        lines.append("axis: " + " ".join(names[c] for c in order.axis))
    for vote, w in instance.base_votes:
        lines.append(f"{w}: " + " ".join(names[c] for c in vote.ranking()))
    return "\n".join(lines) + "\n"


def parse_election(path, fmt: str | None = None) -> tuple[ManipulationInstance, HarmoniousOrder | None]:
    """Load an election from ``path``; ``fmt`` is ``json`` or ``txt`` (default: by suffix)."""
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "txt"
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    if fmt == "json":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: line {exc.lineno}: {exc.msg}") from None
        return election_from_dict(doc)
    if fmt == "txt":
        return parse_text(text)
    raise InputError(f"unknown format {fmt!r}")
