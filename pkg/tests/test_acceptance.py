"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Criteria 1-11 run in the default gate; the genus 6 and 7 presentation runs
are marked ``extended`` and excluded from it (run with ``-m extended``).
"""

import itertools
import random
import time
from fractions import Fraction
from math import comb, factorial

import pytest

from higgsc.algebra import MultiPoly, TruncatedSeries, UniPoly, VarSpec, exact_div
from higgsc.groebner import IdealPresentation, buchberger, normal_form
from higgsc.poincare import identity_suite, invariant_m, invariant_n, m, \
    minimal_stabilization_k, space_n
from higgsc.rings import ORDER, build_ig, build_r, dirac_report, \
    generating_function_oracle, rho, rho_in_ig, verify_n_presentation, \
    verify_presentation, zeta_rec
from higgsc.symprod import beta_g_restriction_check, pair_monomial, \
    vanishing_lemma_check, vanishing_lemma_hypotheses, zagier_eval


def report(capsys, number, description, passed):
    with capsys.disabled():
        verdict = "PASS" if passed else "FAIL"
        print(f"\ncriterion {number:2d} [{verdict}] {description}")
    assert passed, f"criterion {number}: {description}"


def test_criterion_01_betti_n_g2(capsys):
    start = time.monotonic()
    ok = space_n(2) == UniPoly([1, 0, 1, 4, 1, 0, 1])
    ok = ok and time.monotonic() - start < 1.0
    report(capsys, 1, "Betti numbers of N at g=2 (exact, under 1s)", ok)


def test_criterion_02_betti_m_g2_and_middle(capsys):
    start = time.monotonic()
    ok = m(2) == UniPoly([1, 0, 1, 4, 2, 34, 2])
    ok = ok and time.monotonic() - start < 1.0
    for g in range(2, 11):
        ok = ok and m(g)[6 * g - 6] == g and m(g).degree == 6 * g - 6
    report(capsys, 2,
           "Betti numbers of M at g=2; top Betti number equals g for g=2..10",
           ok)


def test_criterion_03_presentation_g2_to_g5(capsys):
    ok = True
    start = time.monotonic()
    for g in (2, 3, 4, 5):
        rep = verify_presentation(g)
        ok = ok and rep["status"] == "verified"
        ok = ok and rep["hilbert"] == [int(c) for c in invariant_m(g).coeffs]
    ok = ok and time.monotonic() - start < 600
    report(capsys, 3,
           "presentation of the invariant ring verified for g=2..5", ok)


@pytest.mark.extended
@pytest.mark.parametrize("g", [6, 7])
def test_criterion_03_extended_presentation(capsys, g):
    rep = verify_presentation(g)
    report(capsys, 3, f"extended presentation check at g={g}",
           rep["status"] == "verified")


def test_criterion_04_zagier_ideal(capsys):
    ok = True
    for g in (2, 3, 4, 5):
        rep = verify_n_presentation(g)
        ok = ok and rep["status"] == "verified"
        ok = ok and rep["hilbert"] == [int(c) for c in invariant_n(g).coeffs]
    report(capsys, 4, "Zagier-ideal Hilbert series matches for g=2..5", ok)


def test_criterion_05_beta_g_theorem(capsys):
    ok = True
    for g in (2, 3, 4, 5):
        beta = MultiPoly.var(ORDER.spec, "beta")
        gb_r = build_r(g).groebner()
        gb_i = build_ig(g).groebner()
        ok = ok and normal_form(beta ** g, gb_r).in_ideal
        ok = ok and rho_in_ig(0, g, 0, g).in_ideal
        ok = ok and not normal_form(beta ** (g - 1), gb_r).in_ideal
    for g in (2, 3, 4):
        first = rho(1, g - 1, 0, g)
        ok = ok and normal_form(first, build_r(g).groebner()).in_ideal
        ok = ok and normal_form(first, build_ig(g).groebner()).in_ideal
    report(capsys, 5,
           "beta^g vanishes (R_g and I_g), beta^{g-1} survives; "
           "first relation in both ideals", ok)


def test_criterion_06_vanishing_lemma_grid(capsys):
    start = time.monotonic()
    ok = True
    checked = 0
    for g in (2, 3, 4):
        for n in range(2 * g - 1):
            for k in range(2 * g + 1):
                for mm in range(2 * g + 1):
                    for l in range(2 * g + 1):
                        if vanishing_lemma_hypotheses(n, k, mm, l, g):
                            checked += 1
                            ok = ok and vanishing_lemma_check(n, k, mm, l, g)
    ok = ok and checked > 0 and time.monotonic() - start < 60
    report(capsys, 6,
           f"vanishing lemma on the full grid g<=4 ({checked} tuples, "
           "under 1 min)", ok)


def test_criterion_07_beta_g_restriction(capsys):
    ok = True
    for g in (2, 3, 4):
        for d in range(1, g):
            ok = ok and beta_g_restriction_check(g, d)
    for g in (2, 3):
        for d in range(1, g):
            ok = ok and generating_function_oracle(g, d)
    report(capsys, 7,
           "beta^g restriction vanishes on all strata (g<=4); generating "
           "function matches the closed form (g=2,3)", ok)


def test_criterion_08_dirac_chern(capsys):
    ok = True
    for g in (2, 3, 4, 5, 6):
        rep = dirac_report(g)
        ok = ok and rep["status"] == "verified"
    report(capsys, 8,
           "Dirac bundle: rank 4g-4, closed-form total Chern class, "
           "vanishing above 4g-4, for g=2..6", ok)


def test_criterion_09_identity_suite(capsys):
    ok = True
    for g in range(2, 9):
        results = identity_suite(g)
        ok = ok and all(r.passed for r in results)
    report(capsys, 9, "identity suite (duality, Euler characteristic, "
           "compactification, decompositions) for g=2..8", ok)


def test_criterion_10_stabilization(capsys):
    k2 = minimal_stabilization_k(2, 10)
    k3 = minimal_stabilization_k(3, 10)
    ok = k2 == 4 and k3 == 1
    report(capsys, 10,
           f"stabilization to the classifying space through degree 10 "
           f"(minimal k: g=2 -> {k2}, g=3 -> {k3})", ok)


def test_criterion_11_property_suites(capsys):
    rng = random.Random(20260826)
    ok = True

    spec = VarSpec.of(("a", 1), ("b", 1))

    def rand_mp():
        return MultiPoly(spec, {
            (rng.randint(0, 3), rng.randint(0, 3)):
                Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            for _ in range(rng.randint(0, 4))})

    # ring axioms
    for _ in range(60):
        p, q, r = rand_mp(), rand_mp(), rand_mp()
        ok = ok and (p + q) + r == p + (q + r)
        ok = ok and (p * q) * r == p * (q * r)
        ok = ok and p * (q + r) == p * q + p * r
        ok = ok and p * q == q * p

    # exact division round trips
    for _ in range(60):
        a = UniPoly([rng.randint(-5, 5) for _ in range(rng.randint(0, 5))])
        b = UniPoly([rng.randint(-5, 5) for _ in range(rng.randint(1, 5))] +
                    [rng.randint(1, 5)])
        ok = ok and exact_div(a * b, b) == a

    # series inverses
    xspec = VarSpec.of(("x", 1),)
    for _ in range(30):
        terms = {(i + 1,): Fraction(rng.randint(-3, 3))
                 for i in range(rng.randint(1, 4))}
        f = TruncatedSeries(MultiPoly.const(xspec, 1) + MultiPoly(xspec, terms), 6)
        ok = ok and f.inverse() * f == TruncatedSeries.one(xspec, 6)
        g = TruncatedSeries(MultiPoly(xspec, terms), 6)
        ok = ok and g.exp().log() == g

    # residue pairing agrees with brute force on the full small range
    for g in range(2, 6):
        for n in range(9):
            for a in range(n + 1):
                b = n - a
                brute = zagier_eval(UniPoly.monomial(a), UniPoly.one(), n, g)
                ok = ok and pair_monomial(a, b, n, g) == brute * factorial(b)

    # reduced Groebner bases are permutation independent
    gens = [zeta_rec(r) for r in (2, 3, 4)]
    bases = {buchberger(IdealPresentation.of(tuple(perm), ORDER)).basis
             for perm in itertools.permutations(gens)}
    ok = ok and len(bases) == 1

    report(capsys, 11, "randomized property suites (fixed seed): ring "
           "axioms, division and series inverses, pairing brute force, "
           "Groebner permutation independence", ok)
