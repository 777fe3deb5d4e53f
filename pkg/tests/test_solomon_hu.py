import random
from fractions import Fraction as Q

import pytest

from shintani.cyclotomic import Cyc
from shintani.epscone import DegenerateConeError, SimplicialCone
from shintani.qlinalg import QMatrix, identity, shift_permutation
from shintani.schwartz import (
    act_test,
    chi_lattice,
    fourier,
    indicator,
    minimal_period_multiple,
    tensor,
)
from shintani.series import (
    FormalFraction,
    eq_fraction,
    exp_affine,
    reciprocal_one_minus,
    substitute,
)
from shintani.solomon_hu import (
    enumerate_fundamental_domain,
    phi_nsh,
    phi_sh,
    scaled_generators,
    sh_pair,
)

D = 6


def rho_tuple(n):
    rho = shift_permutation(n)
    out = [identity(n)]
    for _ in range(n - 1):
        out.append(out[-1] @ rho)
    return out


def rand_invertible(rng, n, lo=-2, hi=2):
    while True:
        m = QMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if m.det() != 0:
            return m


def brute_points(gens, f):
    """Independent dense scan at double resolution with rational coordinates."""
    n = f.n
    h2 = 2 * f.h
    lo = [Q(0)] * n
    hi = [Q(0)] * n
    for i in range(n):
        for v in gens:
            if v[i] > 0:
                hi[i] += v[i]
            else:
                lo[i] += v[i]
    out = []
    grid = [()]
    for i in range(n):
        rng_i = []
        k = -int(-lo[i] * h2) - 2
        while Q(k, 1) / h2 <= hi[i]:
            rng_i.append(Q(k) / h2)
            k += 1
        grid = [p + (x,) for p in grid for x in rng_i]
    from shintani.epscone import _solve_coords

    for w in grid:
        lam = _solve_coords(tuple(gens), w)
        if lam is None or not all(0 < x <= 1 for x in lam):
            continue
        val = f.value_at(w)
        if not val.is_zero():
            out.append((w, val))
    return sorted(out)


# ---------------------------------------------------------------------------
# enumeration


def test_enumerate_ray_unit():
    pts = enumerate_fundamental_domain([(1,)], chi_lattice(1))
    assert pts == [((Q(1),), Cyc.one())]


def test_enumerate_ray_double():
    pts = enumerate_fundamental_domain([(2,)], chi_lattice(1))
    assert [p for p, _ in pts] == [(Q(1),), (Q(2),)]


def test_enumerate_square():
    pts = enumerate_fundamental_domain([(1, 0), (0, 1)], chi_lattice(2))
    assert pts == [((Q(1), Q(1)), Cyc.one())]


def test_enumerate_against_double_resolution_scan():
    rng = random.Random(3)
    done = 0
    while done < 8:
        n = rng.choice([1, 2])
        f = indicator(
            tuple(Q(rng.randint(0, 2), rng.choice([1, 2])) for _ in range(n)),
            tuple(Q(rng.choice([1, 2])) for _ in range(n)),
        )
        gens = [tuple(rng.randint(-2, 2) for _ in range(n)) for _ in range(n)]
        try:
            scaled = scaled_generators(gens, f)
        except DegenerateConeError:
            continue
        got = enumerate_fundamental_domain(gens, f)
        assert got == brute_points(scaled, f)
        done += 1


def test_scaling_into_period_lattice():
    f = fourier(indicator((Q(1, 3),), (Q(1),)))  # period 3 on Z-grid
    assert minimal_period_multiple(f, (1,)) == 3
    scaled = scaled_generators([(1,)], f)
    assert scaled == [(Q(3),)]


# ---------------------------------------------------------------------------
# the pairing


def test_sh_pair_ray_chi_Z():
    # <chi_{R+}, chi_Z> = e^T/(1-e^T) = -1/T - 1/2 - T/12 + ...
    got = sh_pair(SimplicialCone([(1,)]), chi_lattice(1), D)
    expect = FormalFraction.from_series(exp_affine(0, (1,), D + 2)) * reciprocal_one_minus(
        0, (1,), D + 1
    )
    assert eq_fraction(got, expect, D)


def test_sh_pair_lemma_closed_form():
    # <chi_{R+}, hat chi_{a+dZ}> = (1/d) w/(1-w), w = e^{(T-2 pi i a)/d}
    for a, d in [(Q(0), Q(1)), (Q(1, 3), Q(1)), (Q(1, 2), Q(2)), (Q(2, 3), Q(3))]:
        fhat = fourier(indicator((a,), (d,)))
        got = sh_pair(SimplicialCone([(1,)]), fhat, D)
        omega = FormalFraction.from_series(exp_affine(-a / d, (1 / d,), D + 2))
        expect = (omega * reciprocal_one_minus(-a / d, (1 / d,), D + 1)).scaled(1 / d)
        assert eq_fraction(got, expect, D), (a, d)


def test_sh_pair_generator_rescaling_invariance():
    rng = random.Random(9)
    f = indicator((Q(1, 2), Q(0)), (Q(1), Q(2)))
    gens = [(1, 0), (1, 1)]
    base = sh_pair(SimplicialCone(gens), f, D)
    # doubling a generator must not change the pairing
    other = sh_pair(SimplicialCone([(2, 0), (1, 1)]), f, D)
    assert eq_fraction(base, other, D)


def test_sh_pair_additivity():
    f = indicator((Q(1, 2),), (Q(1),))
    g = indicator((Q(1, 3),), (Q(2),))
    cone = SimplicialCone([(1,)])
    lhs = sh_pair(cone, f + g, D)
    rhs = sh_pair(cone, f, D) + sh_pair(cone, g, D)
    assert eq_fraction(lhs, rhs, D)


def test_sh_pair_zero_function():
    z = chi_lattice(1) - chi_lattice(1)
    assert sh_pair(SimplicialCone([(1,)]), z, D).is_zero()


# ---------------------------------------------------------------------------
# phi_nsh


def test_phi_nsh_one_dim_lemma():
    fhat = fourier(indicator((Q(1, 3),), (Q(2),)))
    got = phi_nsh([identity(1)], fhat, D)
    a, d = Q(1, 3), Q(2)
    omega = FormalFraction.from_series(exp_affine(-a / d, (1 / d,), D + 2))
    expect = (omega * reciprocal_one_minus(-a / d, (1 / d,), D + 1)).scaled(1 / d)
    assert eq_fraction(got, expect, D)


def test_phi_nsh_product_case():
    # factorizable f: the rho-tuple value is the product of 1-d values
    f1 = fourier(indicator((Q(1, 2),), (Q(1),)))
    f2 = fourier(indicator((Q(1, 3),), (Q(2),)))
    f = tensor([f1, f2])
    got = phi_nsh(rho_tuple(2), f, D)
    p1 = phi_nsh([identity(1)], f1, D + 1)
    p2 = phi_nsh([identity(1)], f2, D + 1)
    # lift the univariate values into the two variables and multiply
    lift1 = FormalFraction(
        _lift(p1.num, 2, 0), tuple(_lift_form(d_, 2, 0) for d_ in p1.dens)
    )
    lift2 = FormalFraction(
        _lift(p2.num, 2, 1), tuple(_lift_form(d_, 2, 1) for d_ in p2.dens)
    )
    assert eq_fraction(got, lift1 * lift2, D)


def _lift(s, n, axis):
    from shintani.series import MultiSeries

    out = {}
    for (k,), c in s.coeffs.items():
        m = tuple(k if i == axis else 0 for i in range(n))
        out[m] = c
    return MultiSeries(n, s.degree, out)


def _lift_form(form, n, axis):
    from shintani.series import LinForm

    c = form.coeffs[0]
    return LinForm(tuple(c if i == axis else 0 for i in range(n)))


def test_phi_nsh_degenerate_cone_rejected():
    g1 = QMatrix([[1, 0], [2, 1]])
    g2 = QMatrix([[2, 1], [4, 0]])  # first columns dependent
    with pytest.raises(DegenerateConeError):
        phi_nsh([g1, g2], chi_lattice(2), D)


def test_phi_nsh_equivariance_instance():
    # Phi(g g1, g g2)(f) = g . Phi(g1, g2)(g^T . f)
    rng = random.Random(21)
    done = 0
    while done < 5:
        n = rng.choice([1, 2])
        gammas = [rand_invertible(rng, n) for _ in range(n)]
        g = rand_invertible(rng, n)
        f = fourier(indicator(
            tuple(Q(rng.randint(0, 2), rng.choice([1, 2])) for _ in range(n)),
            (Q(rng.choice([1, 2])),) * n,
        ))
        try:
            lhs = phi_nsh([g @ gj for gj in gammas], f, D)
            rhs = substitute(g, phi_nsh(gammas, act_test(g.T, f), D))
        except DegenerateConeError:
            continue
        assert eq_fraction(lhs, rhs, D)
        done += 1


# ---------------------------------------------------------------------------
# phi_sh


def test_phi_sh_equals_phi_nsh_on_rho_tuple():
    for n in (1, 2):
        f = fourier(indicator((Q(1, 2),) * n, (Q(1),) * n))
        a = phi_sh(rho_tuple(n), f, D)
        b = phi_nsh(rho_tuple(n), f, D)
        assert eq_fraction(a, b, D)


def test_phi_sh_one_dim_chi_Z():
    got = phi_sh([identity(1)], chi_lattice(1), D)
    expect = FormalFraction.from_series(exp_affine(0, (1,), D + 2)) * reciprocal_one_minus(
        0, (1,), D + 1
    )
    assert eq_fraction(got, expect, D)


def test_phi_sh_sign_twisted_equivariance():
    # Phi^Sh(g g1, g g2) = sign(g) Phi^Sh(g1, g2)|_{g^T}
    rng = random.Random(33)
    done = 0
    while done < 4:
        n = 2
        gammas = [rand_invertible(rng, n) for _ in range(n)]
        g = rand_invertible(rng, n)
        f = fourier(indicator((Q(1, 2), Q(0)), (Q(1), Q(1))))
        try:
            lhs = phi_sh([g @ gj for gj in gammas], f, D)
            rhs = substitute(g, phi_sh(gammas, act_test(g.T, f), D)).scaled(g.sign())
        except DegenerateConeError:
            continue
        assert eq_fraction(lhs, rhs, D)
        done += 1
