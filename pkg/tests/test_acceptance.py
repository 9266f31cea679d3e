"""Acceptance criteria 1-8.

Each test records a one-line PASS/FAIL verdict that is echoed in the
terminal summary (see ``conftest.py``), then asserts it.
"""

import itertools
import random
import time

import pytest

from bordamanip import (
    FmmInstance,
    HarmoniousOrder,
    ManipulationInstance,
    Vote,
    base_scores,
    export_ilp,
    is_coincident,
    matrix_to_votes,
    solve_fmm,
    solve_ubm,
    solve_ubm1sp,
    solve_ubm2sp,
    solve_wbm,
    verify_manipulation,
    verify_matrix,
)
from bordamanip.fmm import fill_table
from bordamanip.formats import parse_election
from bordamanip.oracle import brute_fmm, brute_sp, brute_wbm, is_coincident_by_triples
from bordamanip.single_peaked import enumerate_coincident_votes
from bordamanip.ubm import ConstructionTrace

from helpers import (
    DATA,
    names,
    position_counts,
    random_instance,
    random_magic_matrix,
    random_sp_instance,
    targeted_sp_instance,
)

MANIPULATOR_WEIGHTS = [(), (1,), (2,), (1, 1), (1, 2), (2, 2)]


def wbm_grid():
    """Every instance of the exhaustive grid: up to 4 non-p candidates, up to
    two base votes from all permutations, base and manipulator weights in {1, 2}, t <= 2."""
    for m in range(1, 6):
        perms = [Vote(p) for p in itertools.permutations(range(1, m + 1))]
        profiles = [()]
        for n_votes in (1, 2):
            for combo in itertools.combinations_with_replacement(range(len(perms)), n_votes):
                for ws in itertools.product((1, 2), repeat=n_votes):
                    profiles.append(tuple((perms[k], w) for k, w in zip(combo, ws)))
        for profile in profiles:
            for mw in MANIPULATOR_WEIGHTS:
                yield ManipulationInstance(names(m), 0, profile, mw)


def canonical(instance):
    """Score signature: p's score, the sorted other scores and the coalition.

    Both deciders read the base profile only through the score vector, and
    relabelling the non-distinguished candidates cannot change the verdict,
    so instances sharing a signature share a verdict.
    """
    scores = base_scores(instance)
    p = instance.distinguished
    others = tuple(sorted(s for c, s in enumerate(scores) if c != p))
    return scores[p], others, instance.manipulator_weights


def test_criterion_1_wbm_oracle(record_criterion):
    start = time.perf_counter()
    witnesses = {}
    n_grid = 0
    for instance in wbm_grid():
        n_grid += 1
        witnesses.setdefault((instance.m_total, canonical(instance)), instance)
    failures = []
    n_yes = 0

    def check(instance):
        nonlocal n_yes
        exact = solve_wbm(instance)
        brute = brute_wbm(instance)
        if exact.verdict != brute.verdict:
            failures.append(("verdict", instance))
        elif exact.verdict:
            n_yes += 1
            if not verify_manipulation(instance, exact.votes):
                failures.append(("certificate", instance))
        return exact.verdict

    for instance in witnesses.values():
        check(instance)

    # relabelling invariance behind the deduplication, on raw grid members
    rng = random.Random(2024)
    grid_sample = rng.sample(range(n_grid), 500)
    picked = set(grid_sample)
    for k, instance in enumerate(wbm_grid()):
        if k in picked:
            verdict = check(instance)
            ref = solve_wbm(witnesses[(instance.m_total, canonical(instance))]).verdict
            if verdict != ref:
                failures.append(("invariance", instance))

    rng = random.Random(7)
    for _ in range(500):
        m = rng.randint(2, 5)
        t = rng.randint(1, 3) if m <= 4 else rng.randint(1, 2)
        check(random_instance(rng, m, rng.randint(0, 4), t, weights=(1, 2, 3), p=rng.randrange(m)))

    elapsed = time.perf_counter() - start
    passed = not failures and elapsed < 300
    record_criterion(
        1, passed,
        f"{n_grid} grid instances in {len(witnesses)} score classes + 500 grid samples + 500 random; "
        f"{len(failures)} disagreements, {n_yes} certified YES, {elapsed:.1f}s (< 300s)",
    )
    assert passed, failures[:5]


def test_criterion_2_fmm_oracle(record_criterion):
    start = time.perf_counter()
    failures = []
    cases = 0

    def check(inst):
        nonlocal cases
        cases += 1
        M = solve_fmm(inst)
        brute = brute_fmm(inst)
        if (M is None) != (brute is None):
            failures.append(inst)
        elif M is not None and not verify_matrix(M, inst):
            failures.append(inst)

    for m in range(1, 4):
        for t in range(1, 4):
            for g in itertools.product(range((m - 1) * t + 1), repeat=m):
                check(FmmInstance(g, t))
    rng = random.Random(11)
    for _ in range(500):
        t = rng.randint(1, 3)
        check(FmmInstance(tuple(rng.randint(0, 3 * t) for _ in range(4)), t))
    elapsed = time.perf_counter() - start
    passed = not failures and elapsed < 120
    record_criterion(2, passed, f"{cases} instances, {len(failures)} disagreements, {elapsed:.1f}s (< 120s)")
    assert passed, failures[:5]


def test_criterion_3_ubm_end_to_end(record_criterion):
    start = time.perf_counter()
    rng = random.Random(33)
    failures = []
    n_chains = longest = 0
    for _ in range(1000):
        m = rng.randint(2, 5)
        instance = random_instance(rng, m, rng.randint(0, 4), rng.randint(1, 3), p=rng.randrange(m))
        trace = ConstructionTrace()
        out = solve_ubm(instance, trace=trace)
        if out.verdict != brute_wbm(instance).verdict:
            failures.append(("verdict", instance))
            continue
        if not out.verdict:
            continue
        M = out.stats["matrix"]
        local = [c for c in range(m) if c != instance.distinguished]
        counts = [[sum(1 for v in out.votes if v[c] == j) for j in range(1, m)] for c in local]
        if counts != M or not verify_manipulation(instance, out.votes):
            failures.append(("counts", instance))
        if any(s > 2 * (m - 1) for s in trace.chains):
            failures.append(("chain", instance))
        n_chains += len(trace.chains)
        longest = max([longest, *trace.chains])

    # matrices that force exchanges, straight into the construction
    for _ in range(300):
        mm, t = rng.randint(2, 4), rng.randint(2, 3)
        M = random_magic_matrix(rng, mm, t)
        trace = ConstructionTrace()
        votes = matrix_to_votes(M, t, trace)
        if position_counts(votes, mm) != M or any(s > 2 * mm for s in trace.chains):
            failures.append(("matrix", M))
        n_chains += len(trace.chains)
        longest = max([longest, *trace.chains])

    elapsed = time.perf_counter() - start
    passed = not failures and elapsed < 300
    record_criterion(
        3, passed,
        f"1000 instances + 300 matrices, {len(failures)} failures, {n_chains} exchange chains "
        f"(longest {longest}), {elapsed:.1f}s (< 300s)",
    )
    assert passed, failures[:5]


def test_criterion_4_single_peaked(record_criterion):
    start = time.perf_counter()
    rng = random.Random(44)
    failures = []
    stats = {"one": 0, "two": 0, "diverge": 0, "gap_fill": 0}

    def certify(instance, order, out):
        return verify_manipulation(instance, out.votes) and all(is_coincident(v, order) for v in out.votes)

    for _ in range(1000):
        k = rng.randint(2, 10)
        instance, order = random_sp_instance(rng, k, 1, rng.randint(0, 6))
        out = solve_ubm1sp(instance, order)
        stats["one"] += 1
        if out.verdict != brute_sp(instance, order).verdict or (out.verdict and not certify(instance, order, out)):
            failures.append(("1sp", instance, order))

    for n in range(1200):
        k = rng.randint(2, 7)
        if n % 2 and k >= 3:
            instance, order = targeted_sp_instance(rng, k)
        else:
            instance, order = random_sp_instance(rng, k, 2, rng.randint(0, 6))
        out = solve_ubm2sp(instance, order)
        stats["two"] += 1
        stats["diverge"] += out.stats["diverge"] > 0
        stats["gap_fill"] += out.stats["gap_fill"] > 0
        if out.verdict != brute_sp(instance, order).verdict or (out.verdict and not certify(instance, order, out)):
            failures.append(("2sp", instance, order))

    elapsed = time.perf_counter() - start
    total = stats["one"] + stats["two"]
    passed = not failures and total >= 2000 and elapsed < 300
    record_criterion(
        4, passed,
        f"{stats['one']} one-manipulator + {stats['two']} two-manipulator instances "
        f"({stats['diverge']} diverged, {stats['gap_fill']} with gap fills), "
        f"{len(failures)} disagreements, {elapsed:.1f}s (< 300s)",
    )
    assert passed, failures[:3]


def test_criterion_5_coincidence(record_criterion):
    start = time.perf_counter()
    rng = random.Random(55)
    mismatches = checked = 0
    for k in range(1, 7):
        all_axes = list(itertools.permutations(range(k)))
        axes = all_axes if k <= 4 else rng.sample(all_axes, k)
        for axis in axes:
            order = HarmoniousOrder(axis)
            for perm in itertools.permutations(range(1, k + 1)):
                checked += 1
                mismatches += is_coincident(perm, order) != is_coincident_by_triples(perm, order)
    bad_counts = []
    for k in range(1, 13):
        order = HarmoniousOrder(tuple(range(k)))
        votes = list(enumerate_coincident_votes(order))
        if len(votes) != 2 ** (k - 1) or len(set(votes)) != len(votes) or not all(is_coincident(v, order) for v in votes):
            bad_counts.append(k)
    elapsed = time.perf_counter() - start
    passed = mismatches == 0 and not bad_counts and elapsed < 60
    record_criterion(
        5, passed,
        f"{checked} (vote, axis) pairs, {mismatches} mismatches; counts 2^(k-1) for k<=12 "
        f"{'hold' if not bad_counts else f'fail at {bad_counts}'}; {elapsed:.1f}s (< 60s)",
    )
    assert passed


@pytest.mark.slow
def test_criterion_6_runtime(record_criterion):
    rng = random.Random(66)
    timings = {}

    start = time.perf_counter()
    for instance in (
        ManipulationInstance(names(8), 0, (), (1, 1)),  # every placement safe: widest table
        random_instance(rng, 8, 5, 2, p=0),
    ):
        out = solve_wbm(instance)
        assert out.verdict is False or verify_manipulation(instance, out.votes)
    timings["wbm m=7 t=2"] = time.perf_counter() - start

    start = time.perf_counter()
    bound_ok = True
    for instance in (
        ManipulationInstance(names(9), 0, (), (1, 1, 1)),
        random_instance(rng, 9, 6, 3, p=0),
    ):
        out = solve_ubm(instance)
        assert out.verdict is False or verify_manipulation(instance, out.votes)
        if out.stats["states_stored"] > 4**8:
            bound_ok = False
    timings["ubm m=8 t=3"] = time.perf_counter() - start

    for _ in range(200):
        m, t = rng.randint(1, 6), rng.randint(1, 4)
        inst = FmmInstance(tuple(rng.randint(0, (m - 1) * t) for _ in range(m)), t)
        bound_ok &= sum(len(layer) for layer in fill_table(inst)) <= (t + 1) ** m

    passed = timings["wbm m=7 t=2"] < 120 and timings["ubm m=8 t=3"] < 60 and bound_ok
    record_criterion(
        6, passed,
        f"wbm m=7,t=2 {timings['wbm m=7 t=2']:.1f}s (< 120s); ubm m=8,t=3 {timings['ubm m=8 t=3']:.1f}s (< 60s); "
        f"stored states within (t+1)^m: {bound_ok}",
    )
    assert passed


def test_criterion_7_ilp_export(record_criterion, tmp_path):
    golden = export_ilp(FmmInstance((1, 1), 1)) == (DATA / "fmm_m2_t1_g1_1.lp").read_text()
    try:
        import highspy
    except ImportError:
        record_criterion(7, golden, "golden file " + ("matches" if golden else "differs") + "; no LP solver, cross-check skipped")
        assert golden
        pytest.skip("highspy not installed")

    rng = random.Random(77)
    mismatches = 0
    for _ in range(100):
        m, t = rng.randint(1, 4), rng.randint(1, 3)
        inst = FmmInstance(tuple(rng.randint(0, (m - 1) * t) for _ in range(m)), t)
        path = tmp_path / "model.lp"
        path.write_text(export_ilp(inst))
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.readModel(str(path))
        h.run()
        feasible = h.getModelStatus() == highspy.HighsModelStatus.kOptimal
        mismatches += feasible != (solve_fmm(inst) is not None)
    passed = golden and mismatches == 0
    record_criterion(
        7, passed,
        f"golden file {'matches' if golden else 'differs'}; HiGHS feasibility vs DP on 100 models: {mismatches} mismatches",
    )
    assert passed


def test_criterion_8_figure_fixture(record_criterion):
    instance, order = parse_election(DATA / "fig2.json")
    coincident = all(is_coincident(v, order) for v, _ in instance.base_votes)
    scores = dict(zip(instance.candidates, base_scores(instance)))
    expected = {"A": 5, "B": 9, "C": 6, "D": 8, "E": 2}
    passed = coincident and scores == expected
    record_criterion(8, passed, f"votes coincident with A C B D E: {coincident}; scores {scores}")
    assert passed
