"""Command-line entry point.

Exit codes: 0 solved (either verdict), 1 ``--expect`` mismatch or failed
verification, 2 input error, 3 resource guard tripped, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .election import (
    Infeasible,
    InputError,
    ResourceLimitError,
    Vote,
    combined_scores,
    verify_manipulation,
)
from .fmm import export_ilp
from .formats import parse_election
from .oracle import brute_sp, brute_wbm
from .single_peaked import is_coincident, solve_ubm1sp, solve_ubm2sp
from .ubm import reduce_ubm_to_fmm, solve_ubm
from .wbm import solve_wbm

logger = logging.getLogger("bordamanip")

RESULT_FORMAT_VERSION = 1
PROBLEMS = ("wbm", "ubm", "ubm1sp", "ubm2sp")

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_RESOURCE, EXIT_INTERNAL = range(5)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bordamanip", description="Exact Borda manipulation solver."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide an instance and print a JSON result")
    solve.add_argument("--problem", choices=PROBLEMS, required=True)
    solve.add_argument("--input", required=True, type=Path)
    solve.add_argument("--format", choices=("json", "txt"), help="default: by file suffix")
    solve.add_argument("--certify", action="store_true", help="re-check the certificate")
    solve.add_argument("--export-ilp", type=Path, metavar="PATH", help="write the matrix model (ubm)")
    solve.add_argument("--oracle", action="store_true", help="use the brute-force decider")
    solve.add_argument("--expect", choices=("yes", "no"))
    solve.add_argument("--max-states", type=int, default=2**26)
    solve.add_argument("--threads", type=int, default=1, help="accepted; solvers run single-threaded")
    solve.add_argument("--symmetry", action="store_true", help="merge equal-weight manipulators (wbm)")
    solve.add_argument("--dump-table", type=Path, metavar="PATH", help="write the wbm table")
    solve.add_argument("--no-timing", action="store_true", help="emit elapsed_ms as null")
    solve.add_argument("--output", type=Path, help="write the result here instead of stdout")

    verify = sub.add_parser("verify", help="check a result document against an election")
    verify.add_argument("--input", required=True, type=Path)
    verify.add_argument("--format", choices=("json", "txt"))
    verify.add_argument("--result", required=True, type=Path)
    verify.add_argument("--problem", choices=PROBLEMS, help="also check single-peakedness for sp problems")
    return parser


def _solve(args, instance, order):
    problem = args.problem
    if problem in ("ubm1sp", "ubm2sp") and order is None:
        raise InputError("harmonious_order is required for single-peaked problems")
    if problem != "wbm" and not instance.is_unit_weight:
        raise InputError(f"{problem} needs unit manipulator weights")
    if problem == "ubm1sp" and instance.t != 1:
        raise InputError("ubm1sp needs exactly one manipulator")
    if problem == "ubm2sp" and instance.t != 2:
        raise InputError("ubm2sp needs exactly two manipulators")

    if args.oracle:
        if problem in ("wbm", "ubm"):
            return brute_wbm(instance)
        return brute_sp(instance, order)
    if problem == "wbm":
        if args.dump_table:
            with open(args.dump_table, "w") as fh:
                return solve_wbm(instance, args.max_states, args.symmetry, dump=fh)
        return solve_wbm(instance, args.max_states, args.symmetry)
    if problem == "ubm":
        return solve_ubm(instance, args.max_states)
    if problem == "ubm1sp":
        return solve_ubm1sp(instance, order)
    return solve_ubm2sp(instance, order)


def _certify(problem, instance, order, votes) -> bool:
    ok = verify_manipulation(instance, votes)
    if problem in ("ubm1sp", "ubm2sp"):
        ok = ok and all(is_coincident(v, order) for v in votes)
    return ok


def result_document(problem, instance, outcome, certified, elapsed_ms, solver) -> dict:
    names = instance.candidates
    votes = final = None
    if outcome.verdict:
        votes = [[names[c] for c in Vote(v).ranking()] for v in outcome.votes]
        scores = combined_scores(instance, outcome.votes)
        final = {names[c]: scores[c] for c in range(instance.m_total)}
    doc = {
        "format_version": RESULT_FORMAT_VERSION,
        "problem": problem,
        "solver": solver,
        "verdict": "YES" if outcome.verdict else "NO",
        "manipulator_votes": votes,
        "final_scores": final,
        "stats": {
            "states_stored": int(outcome.stats.get("states_stored", 0)),
            "elapsed_ms": elapsed_ms,
        },
    }
    if certified is not None:
        doc["certified"] = certified
    return doc


def cmd_solve(args) -> int:
    instance, order = parse_election(args.input, args.format)
    if args.export_ilp is not None:
        if args.problem != "ubm":
            raise InputError("--export-ilp applies to ubm inputs only")
        try:
            args.export_ilp.write_text(export_ilp(reduce_ubm_to_fmm(instance)))
        except Infeasible as exc:
            logger.warning("no model written: %s", exc)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    start = time.perf_counter()
    outcome = _solve(args, instance, order)
    elapsed = None if args.no_timing else round((time.perf_counter() - start) * 1000, 3)
    certified = None
    if args.certify and outcome.verdict:
        certified = _certify(args.problem, instance, order, outcome.votes)
        if not certified:
            logger.error("certificate failed verification")
    doc = result_document(
        args.problem, instance, outcome, certified, elapsed, "oracle" if args.oracle else "exact"
    )
    text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    if certified is False:
        return EXIT_INTERNAL
    if args.expect is not None and (args.expect == "yes") != outcome.verdict:
        logger.error("expected %s, got %s", args.expect.upper(), doc["verdict"])
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args) -> int:
    instance, order = parse_election(args.input, args.format)
    try:
        doc = json.loads(args.result.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{args.result}: {exc}") from None
    if doc.get("verdict") != "YES":
        raise InputError("result carries no certificate to verify")
    index = {name: k for k, name in enumerate(instance.candidates)}
    votes = []
    for k, ranking in enumerate(doc.get("manipulator_votes") or []):
        if sorted(ranking) != sorted(instance.candidates):
            logger.error("manipulator_votes[%d] is not a ranking of the candidates", k)
            return EXIT_MISMATCH
        votes.append(Vote.from_ranking([index[n] for n in ranking]))
    problem = args.problem or doc.get("problem")
    if problem in ("ubm1sp", "ubm2sp") and order is None:
        raise InputError("harmonious_order is required to verify single-peaked certificates")
    ok = _certify(problem, instance, order, votes)
    print("VALID" if ok else "INVALID")
    return EXIT_OK if ok else EXIT_MISMATCH


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    handler = cmd_solve if args.command == "solve" else cmd_verify
    try:
        return handler(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except AssertionError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
