"""Acceptance suite: each test is one criterion, checked exactly (tolerance
zero everywhere) at its stated degree, with the stated time budgets asserted.
Run `pytest -v tests/test_acceptance.py` for one pass/fail line per criterion.
"""

import random
import time
from fractions import Fraction as Q
from itertools import product as iproduct

from shintani import harness
from shintani.cyclotomic import Cyc, root_of_unity
from shintani.epscone import DegenerateConeError, sigma_evaluator
from shintani.harness import compare_main, first_columns_matrix
from shintani.milnor import (
    dedekind_wedge_check,
    dlog_phi_st,
    stevens_coboundary_check,
    stevens_units,
)
from shintani.qlinalg import QMatrix, identity, shift_permutation
from shintani.schwartz import (
    Coset,
    act_test,
    fourier,
    indicator,
    normalize,
    rlcm,
)
from shintani.series import (
    FormalFraction,
    eq_fraction,
    exp_affine,
    reciprocal_one_minus,
    substitute,
)
from shintani.solomon_hu import phi_nsh, phi_sh


def _announce(name, ok, extra=""):
    print("[%s] %s %s" % ("PASS" if ok else "FAIL", name, extra), flush=True)
    assert ok, name


def _rand_int_matrix(rng, n, bound):
    return QMatrix([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])


def _rand_tuple(rng, n, bound=3, det_cap=None):
    while True:
        gs = [_rand_int_matrix(rng, n, bound) for _ in range(n)]
        if any(g.det() == 0 for g in gs):
            continue
        lam = first_columns_matrix(gs)
        if lam.det() == 0:
            continue
        if det_cap is not None and abs(lam.det()) > det_cap:
            continue
        return gs


def _rand_cube(rng, n, dens=(1, 2, 3, 4, 5, 6), mods=(1, 2, 3)):
    d = rng.choice(mods)
    a = []
    for _ in range(n):
        q = rng.choice(dens)
        a.append(Q(rng.randint(0, d * q - 1), q))
    return indicator(tuple(a), (Q(d),) * n)


# ---------------------------------------------------------------------------
# 1. Theorem comparison: dlog of the symbol side vs the Fourier cone pairing


def test_criterion_1_main_comparison():
    rng = random.Random(20260810)
    D = 8
    t_suite = time.perf_counter()
    worst = 0.0
    count_neg = 0
    for n in (1, 2, 3):
        det_cap = {1: None, 2: 20, 3: 12}[n]
        for k in range(20):
            gammas = _rand_tuple(rng, n, 3, det_cap)
            f = _rand_cube(rng, n)
            t0 = time.perf_counter()
            rep = compare_main(gammas, f, D)
            dt = time.perf_counter() - t0
            worst = max(worst, dt)
            orient = rep.details[0]["orientation_sign"]
            if orient < 0:
                count_neg += 1
            assert rep.passed, (n, k, rep.details)
            assert dt < 30.0, "instance exceeded 30 s: %.1fs" % dt
    total = time.perf_counter() - t_suite
    assert total < 600.0, "suite exceeded 10 min: %.0fs" % total
    assert count_neg > 0  # both orientations exercised
    _announce(
        "criterion 1 (comparison theorem, n in {1,2,3}, 20 random tuples each, degree 8)",
        True,
        "worst instance %.1fs, total %.0fs" % (worst, total),
    )


def test_criterion_1_unsigned_form_fails_on_negative_orientation():
    # documents the orientation factor: for det(first columns) < 0 the
    # literally-stated unsigned identity is false (see the decisions ledger)
    from shintani.series import fraction_discrepancy

    g1 = QMatrix([[2, 1], [-3, 1]])
    g2 = QMatrix([[-1, 0], [-2, 1]])
    lam = first_columns_matrix([g1, g2])
    assert lam.sign() == -1
    f = indicator((Q(1, 2), Q(1, 3)), (2, 2))
    lhs = dlog_phi_st([g1, g2], f, 4)
    rhs_unsigned = phi_nsh([g1, g2], fourier(f), 4)  # (-1)^2 = +1
    assert not eq_fraction(lhs.coeff, rhs_unsigned, 4)
    rhs_signed = rhs_unsigned.scaled(-1)
    _announce("criterion 1 note (orientation sign is necessary and sufficient)",
              eq_fraction(lhs.coeff, rhs_signed, 4))


# ---------------------------------------------------------------------------
# 2. the shift-permutation tuple gives the open positive orthant


def test_criterion_2_orthant():
    t0 = time.perf_counter()
    rep = harness.suite_cone(4)
    dt = time.perf_counter() - t0
    ok = rep.passed and dt < 60.0
    _announce("criterion 2 (orthant identity up to n=4)", ok, "%.1fs" % dt)


# ---------------------------------------------------------------------------
# 3. equivariance of both cone evaluators


def test_criterion_3_equivariance():
    rng = random.Random(31337)
    D = 6
    for n in (1, 2, 3):
        bound = 2 if n <= 2 else 1
        done_nsh = done_sh = 0
        while done_nsh < 20 or done_sh < 20:
            gammas = _rand_tuple(rng, n, bound)
            g = _rand_int_matrix(rng, n, bound)
            if g.det() == 0:
                continue
            f = fourier(_rand_cube(rng, n, dens=(1, 2), mods=(1, 2)))
            try:
                if done_nsh < 20:
                    lhs = phi_nsh([g @ gj for gj in gammas], f, D)
                    rhs = substitute(g, phi_nsh(gammas, act_test(g.T, f), D))
                    assert eq_fraction(lhs, rhs, D), (n, "nsh")
                    done_nsh += 1
                if done_sh < 20:
                    lhs = phi_sh([g @ gj for gj in gammas], f, D)
                    rhs = substitute(g, phi_sh(gammas, act_test(g.T, f), D)).scaled(g.sign())
                    assert eq_fraction(lhs, rhs, D), (n, "sh")
                    done_sh += 1
            except DegenerateConeError:
                continue
    _announce("criterion 3 (equivariance, 20 instances each, n in {1,2,3}, degree 6)", True)


# ---------------------------------------------------------------------------
# 4. Fourier theory: action identity and the product-coset formula


def test_criterion_4_fourier():
    rng = random.Random(424242)
    done = 0
    while done < 50:
        n = rng.choice([1, 2])
        # product coset with independent moduli per coordinate
        a = tuple(Q(rng.randint(0, 3), rng.choice([1, 2, 3])) for _ in range(n))
        d = tuple(Q(rng.choice([1, 2, 3])) for _ in range(n))
        f = indicator(a, d)
        fhat = fourier(f)
        # closed form on the dual grid
        scale = Q(1)
        for di in d:
            scale /= di
        G = rlcm([Q(1, int(di)) if di == int(di) else 1 / di for di in d])
        ok = True
        for k in range(8):
            y = tuple(Q(k + j) / d[j] for j in range(n))
            expected = root_of_unity(-sum(ai * yi for ai, yi in zip(a, y))) * scale
            if fhat.value_at(y) != expected:
                ok = False
                break
        assert ok, (a, d)
        # action compatibility
        g = _rand_int_matrix(rng, n, 2)
        if g.det() == 0:
            continue
        lhs = fourier(act_test(g, f))
        rhs = act_test(g.inv().T, fourier(f)).scaled(abs(g.det()))
        assert lhs == rhs, (a, d, g)
        done += 1
    _announce("criterion 4 (Fourier action + product-coset formula, 50 instances)", True)


# ---------------------------------------------------------------------------
# 5. refinement invariance


def test_criterion_5_refinement():
    rep = harness.suite_refinement(8)
    _announce("criterion 5 (refinement invariance at dlog level, degree 8)", rep.passed)


# ---------------------------------------------------------------------------
# 6. Dedekind reciprocity dlog shadow


def test_criterion_6_reciprocity():
    rng = random.Random(1729)
    D = 8
    for n in (2, 3):
        for d in (1, 2):
            a = tuple(Q(rng.randint(0, 2 * d), rng.choice([1, 2, 3])) for _ in range(n))
            units, partial = stevens_units(a, d, n)
            assert dedekind_wedge_check(units, partial, D), (n, d, a)
    _announce("criterion 6 (Dedekind reciprocity at dlog, n in {2,3}, d in {1,2}, degree 8)", True)


# ---------------------------------------------------------------------------
# 7. Stevens coboundary certification


def test_criterion_7_coboundary():
    t0 = time.perf_counter()
    cases = [
        ((Q(0), Q(0)), 1, 2, 8),
        ((Q(1, 3), Q(1, 2)), 1, 2, 8),
        ((Q(1, 2), Q(0)), 2, 2, 8),
        ((Q(0), Q(0), Q(0)), 1, 3, 6),
        ((Q(0), Q(0), Q(0)), 2, 3, 6),
        ((Q(1, 2), Q(1, 3), Q(0)), 1, 3, 6),
    ]
    for a, d, n, deg in cases:
        A, R, ok = stevens_coboundary_check(a, d, n, deg)
        assert ok, (a, d, n)
        assert not A.coeff.is_zero()  # non-vacuous certificate
    dt = time.perf_counter() - t0
    assert dt < 300.0
    _announce("criterion 7 (coboundary certificates, %d cases)" % len(cases), True, "%.1fs" % dt)


# ---------------------------------------------------------------------------
# 8. the one-dimensional closed form


def test_criterion_8_closed_form():
    D = 8
    for a, d in [(Q(0), Q(1)), (Q(1, 3), Q(1)), (Q(1, 2), Q(2)), (Q(2, 3), Q(3))]:
        fhat = fourier(indicator((a,), (d,)))
        got = phi_nsh([identity(1)], fhat, D)
        omega = FormalFraction.from_series(exp_affine(-a / d, (1 / d,), D + 2))
        expect = (omega * reciprocal_one_minus(-a / d, (1 / d,), D + 1)).scaled(1 / d)
        assert eq_fraction(got, expect, D), (a, d)
    _announce("criterion 8 (closed form (1/d) w/(1-w) through degree 8, 4 cases)", True)


# ---------------------------------------------------------------------------
# 9. cocycle constancy of the perturbed cone coboundary


def test_criterion_9_coboundary_constancy():
    rng = random.Random(5050)
    done = 0
    while done < 10:
        alphas = []
        while len(alphas) < 3:
            m = _rand_int_matrix(rng, 2, 2)
            if m.det() != 0:
                alphas.append(m)
        try:
            evs = [sigma_evaluator([alphas[1], alphas[2]]),
                   sigma_evaluator([alphas[0], alphas[2]]),
                   sigma_evaluator([alphas[0], alphas[1]])]
        except DegenerateConeError:
            continue
        vals = set()
        count = 0
        while count < 50:
            w = (Q(rng.randint(-9, 9), rng.choice([1, 2, 3])),
                 Q(rng.randint(-9, 9), rng.choice([1, 2, 3])))
            if not any(w):
                continue
            vals.add(evs[0](w) - evs[1](w) + evs[2](w))
            count += 1
        assert len(vals) == 1, (alphas, vals)
        done += 1
    _announce("criterion 9 (delta sigma constant over 50 probes, 10 tuples)", True)
