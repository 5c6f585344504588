"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines as they complete.  Every tolerance and sample count is pinned here;
campaign seeds are fixed so reruns are byte-identical.
"""

import json
import time
from fractions import Fraction
from math import comb

from redei import formats, harness
from redei.affgroup import (
    AffSet,
    classify,
    enumerate_aff,
    pi_bound_check,
    stabilizer,
    unipotent,
)
from redei.bounds import enumerate_lines, vinh_check
from redei.cli import main as cli_main
from redei.ff import construct_field
from redei.harness import Campaign, run_campaign
from redei.plane import (
    INF,
    PlanePointSet,
    TRIVIAL_UPPER,
    complement_and_remainder,
    direction_bounds,
    direction_set,
    is_collinear,
)
from redei.poly import Polynomial

F4 = construct_field(2, 2)
F5 = construct_field(5, 1)
F7 = construct_field(7, 1)
F8 = construct_field(2, 3)
F9 = construct_field(3, 2)

SQUARE4 = PlanePointSet(F4, [(0, 0), (0, 1), (1, 0), (1, 1)])


def _check(number, description, condition, detail=""):
    status = "PASS" if condition else "FAIL"
    extra = f" [{detail}]" if detail else ""
    print(f"ACCEPTANCE {number:>2}: {status} - {description}{extra}")
    assert condition, f"criterion {number} failed: {description}{extra}"


def test_criterion_01_szonyi_bound_exhaustive():
    start = time.perf_counter()
    report = run_campaign(Campaign(target="szonyi", p=5, e=1, sizes=(2, 5),
                                   mode="exhaustive", jobs=1))
    elapsed = time.perf_counter() - start
    _check(1, "lower bound (|A|+3)/2 exhaustive at q=5, sizes 2..5",
           report.violations == [] and elapsed < 60,
           f"checked={report.checked}, {elapsed:.1f}s")


def test_criterion_02_even_degree_bound_exhaustive_q4():
    start = time.perf_counter()
    report = run_campaign(Campaign(target="maindir", p=2, e=2, sizes=(2, 4),
                                   mode="exhaustive"))
    elapsed = time.perf_counter() - start
    square_count = direction_set(SQUARE4).count
    ok = (report.violations == []
          and report.extremal[4]["min_D"] == 3
          and square_count == 3
          and elapsed < 10)
    _check(2, "|D| > |A|/2 exhaustive at q=4; minimum at size 4 is 3",
           ok, f"checked={report.checked}, {elapsed:.1f}s")


def test_criterion_03_direction_threshold_random_q9_q8():
    start = time.perf_counter()
    r9 = run_campaign(Campaign(target="maindir", p=3, e=2, sizes=(2, 9),
                               mode="random", samples=100_000, seed=0))
    r8 = run_campaign(Campaign(target="maindir", p=2, e=3, sizes=(2, 8),
                               mode="random", samples=100_000, seed=0))
    elapsed = time.perf_counter() - start
    ok = (r9.violations == [] and r8.violations == []
          and r9.checked == 100_000 and r8.checked == 100_000
          and elapsed < 300)
    _check(3, "threshold |A|/3 on 1e5 random non-collinear sets at q=9 and q=8",
           ok, f"{elapsed:.1f}s")


def test_criterion_04_two_sided_bounds_sandwich():
    r9 = run_campaign(Campaign(target="qbounds", p=3, e=2, sizes=(2, 9),
                               mode="random", samples=100_000, seed=0, jobs=4))
    r8 = run_campaign(Campaign(target="qbounds", p=2, e=3, sizes=(2, 8),
                               mode="random", samples=100_000, seed=0, jobs=4))
    r4 = run_campaign(Campaign(target="qbounds", p=2, e=2, sizes=(2, 4),
                               mode="exhaustive"))
    b = direction_bounds(SQUARE4)
    fixture_ok = (b.lower, b.upper, direction_set(SQUARE4).count) == (3, 3, 3)
    ok = (r9.violations == [] and r8.violations == [] and r4.violations == []
          and fixture_ok)
    _check(4, "lower <= |D| <= upper on the criteria 2-3 samples; square fixture tight",
           ok, f"applicable: q9={r9.checked}, q8={r8.checked}, q4={r4.checked}")


def test_criterion_05_polynomial_identities():
    import random as _random

    failures = 0
    checked_sets = 0
    for field in (F4, F5, F8, F9):
        xq = Polynomial.x_power(field, field.q)
        minus_x = Polynomial(field, [0, field.neg(1)])
        rng = _random.Random(50_000 + field.q)
        for _ in range(1000):
            size = rng.randint(2, field.q)
            idxs = rng.sample(range(field.q * field.q), size)
            A = PlanePointSet(field, [(i // field.q, i % field.q) for i in idxs])
            rep = direction_set(A)
            finite = {d for d in rep.directions if d != INF}
            checked_sets += 1
            from redei.plane import redei_polynomial
            for y in field.elements():
                H = redei_polynomial(A, y)
                f, g = complement_and_remainder(A, y)
                if H * f != xq + g:
                    failures += 1
                if (g == minus_x) != (y not in finite):
                    failures += 1
                # the degree bound is a statement about non-collinear sets
                # (a line yields g = -x of degree 1 against |D| - 1 = 0)
                if not rep.collinear and g.degree > rep.count - 1:
                    failures += 1
    _check(5, "H*f = x^q + g, g = -x off D, deg g <= |D|-1, 1e3 sets per field",
           failures == 0, f"sets={checked_sets}")


def test_criterion_06_ghost_line_bound():
    reports = []
    for (p, e) in ((2, 2), (5, 1), (2, 3), (3, 2)):
        q = p ** e
        reports.append(run_campaign(Campaign(
            target="ghost", p=p, e=e, sizes=(2, q), mode="random",
            samples=1000, seed=0)))
    ok = all(r.violations == [] and r.checked == 1000 for r in reports)
    _check(6, "at most n ghost slopes per point, 1e3 pairs per field", ok)


def test_criterion_07_more_than_q_spans_all():
    report = run_campaign(Campaign(target="moreq", p=2, e=2, sizes=(5, 5),
                                   mode="exhaustive"))
    ok = report.checked == comb(16, 5) == 4368 and report.violations == []
    _check(7, "every 5-point set at q=4 spans all 5 directions (4368 sets)",
           ok, f"checked={report.checked}")


def test_criterion_08_classification_random_and_fixtures():
    reports = []
    for (p, e) in ((2, 2), (5, 1), (7, 1), (2, 3), (3, 2)):
        reports.append(run_campaign(Campaign(
            target="classify", p=p, e=e, sizes=(1, 10), mode="random",
            samples=10_000, seed=0)))
    campaigns_ok = all(r.violations == [] and r.checked == 10_000 for r in reports)

    stab = classify(stabilizer(F9, 0))
    fix_a = stab.case_a == 0 and stab.disjunction_holds

    uni = classify(unipotent(F4))
    fix_b = (uni.case_b is not None and uni.case_b.pi_size == 1
             and uni.case_b.bound_text == "4" and uni.case_b.holds
             and uni.disjunction_holds)

    whole = classify(AffSet(F7, enumerate_aff(F7)))
    fix_c = (whole.size_regime == "large" and whole.case_c is not None
             and whole.case_c.pi_size == 6 and whole.case_c.bound == 12
             and whole.case_c.holds and whole.case_c.u_covered
             and whole.disjunction_holds)

    _check(8, "structure disjunction on 1e4 random symmetric sets per field + fixtures",
           campaigns_ok and fix_a and fix_b and fix_c)


def test_criterion_09_conjugation_fibers_and_pi_bound():
    r4 = run_campaign(Campaign(target="lemma_phipi", p=2, e=2, sizes=(1, 1),
                               mode="exhaustive"))
    r5 = run_campaign(Campaign(target="lemma_phipi", p=5, e=1, sizes=(1, 1),
                               mode="exhaustive"))
    fibers_ok = (r4.violations == [] and r4.checked == 11
                 and r5.violations == [] and r5.checked == 19)

    u4 = pi_bound_check(unipotent(F4), (1, 1), 1)
    whole5 = pi_bound_check(AffSet(F5, enumerate_aff(F5)), (2, 0), 1)
    stab5 = pi_bound_check(stabilizer(F5, 0), (2, 0), 1)
    examples_ok = (u4.holds and (u4.lhs, u4.rhs) == (1, 4)
                   and whole5.holds and (whole5.lhs, whole5.rhs) == (4, 4)
                   and stab5.holds and (stab5.lhs, stab5.rhs) == (4, 4))
    _check(9, "conjugation fibers exhaustive at q=4,5; projection bound tight cases",
           fibers_ok and examples_ok)


def test_criterion_10_incidence_deviation():
    points = [(a, b) for a in range(7) for b in range(7)]
    holds, res = vinh_check(F7, points, enumerate_lines(F7))
    full_ok = holds and res.deviation_sq == 0 and res.count == 392

    report = run_campaign(Campaign(target="vinh", p=7, e=1, sizes=(0, 56),
                                   mode="random", samples=100_000, seed=0))
    _check(10, "incidence deviation: full plane exact, 1e5 random pairs at q=7",
           full_ok and report.violations == [] and report.checked == 100_000)


def test_criterion_11_kneser_and_power_inequality():
    kneser = run_campaign(Campaign(target="kneser", p=2, e=2, sizes=(1, 4),
                                   mode="exhaustive"))
    kneser_ok = kneser.checked == 225 and kneser.violations == []

    ruzsa = run_campaign(Campaign(target="ruzsa", p=5, e=1, sizes=(1, 6),
                                  mode="random", samples=1000, seed=0))
    ruzsa_ok = ruzsa.checked == 1000 and ruzsa.violations == []
    _check(11, "Kneser exhaustive on GF(4) pairs (225); power inequality 1e3 sets",
           kneser_ok and ruzsa_ok,
           f"kneser={kneser.checked}, ruzsa={ruzsa.checked}")


def test_criterion_12_determinism(capsys):
    argv = ["verify", "--target", "maindir", "--q", "9", "--samples", "3000",
            "--seed", "7", "--sizes", "2..9", "--json"]
    assert cli_main(argv) == 0
    first = capsys.readouterr().out
    assert cli_main(argv) == 0
    second = capsys.readouterr().out
    assert cli_main(argv + ["--jobs", "4"]) == 0
    parallel = capsys.readouterr().out
    cli_ok = first == second == parallel and json.loads(first)["checked"] == 3000

    c = Campaign(target="classify", p=3, e=2, sizes=(1, 8), mode="random",
                 samples=2000, seed=13)
    serial = run_campaign(c).to_json()
    rerun = run_campaign(c).to_json()
    parallel_lib = run_campaign(Campaign(target="classify", p=3, e=2,
                                         sizes=(1, 8), mode="random",
                                         samples=2000, seed=13,
                                         jobs=4)).to_json()
    lib_ok = serial == rerun == parallel_lib
    with capsys.disabled():
        _check(12, "same seed -> byte-identical reports; --jobs 4 agrees with serial",
               cli_ok and lib_ok)
