"""Verification suites tying the cone pairing to the symbol side.

Every check is exact: a suite passes only when the compared series agree
coefficient-by-coefficient through the requested total degree.  Failures
carry the first differing monomial (graded-lex) and both coefficients.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Sequence

from .cyclotomic import Cyc
from .epscone import (
    DegenerateConeError,
    eps_adjugate,
    eps_det,
    eps_sign,
    perturbation_matrix,
    sigma_evaluator,
)
from .milnor import (
    dedekind_wedge_check,
    dlog_chain,
    dlog_phi_st,
    eta_of_cosets,
    dlog_unit,
    stevens_coboundary_check,
    stevens_units,
    xi_st,
)
from .qlinalg import QMatrix, identity, matrix_to_json, shift_permutation
from .schwartz import (
    Coset,
    TestFunction,
    act_test,
    fourier,
    indicator,
    normalize,
    tensor,
)
from .series import eq_fraction, fraction_discrepancy
from .solomon_hu import phi_nsh, phi_sh
from .series import substitute

Q = Fraction


@dataclass
class VerificationReport:
    check: str
    inputs: dict
    passed: bool
    details: list = field(default_factory=list)
    runtime_s: float = 0.0

    def to_json(self):
        return {
            "check": self.check,
            "inputs": self.inputs,
            "passed": self.passed,
            "details": self.details,
            "runtime_s": round(self.runtime_s, 3),
        }

    def render_text(self) -> str:
        lines = ["[%s] %s (%.2fs)" % ("PASS" if self.passed else "FAIL", self.check, self.runtime_s)]
        for d in self.details:
            status = d.get("status", "?")
            label = d.get("label", "")
            lines.append("  %-4s %s" % (status, label))
            if "first_discrepancy" in d and d["first_discrepancy"]:
                lines.append("       first discrepancy: %s" % (d["first_discrepancy"],))
        return "\n".join(lines)


def _discrepancy_json(disc):
    if disc is None:
        return None
    m, lhs, rhs = disc
    return {
        "monomial": list(m),
        "degree": sum(m),
        "lhs": lhs.to_json(),
        "rhs": rhs.to_json(),
    }


def _instance(label, ok, disc=None, **extra):
    d = {"label": label, "status": "ok" if ok else "FAIL"}
    if disc is not None:
        d["first_discrepancy"] = _discrepancy_json(disc)
    d.update(extra)
    return d


def first_columns_matrix(gammas: Sequence[QMatrix]) -> QMatrix:
    n = len(gammas)
    return QMatrix([[g.rows[i][0] for g in gammas] for i in range(n)])


# ---------------------------------------------------------------------------
# the main comparison (Stevens symbol dlog vs Fourier-side cone pairing)

def compare_main(gammas: Sequence[QMatrix], f: TestFunction, D) -> VerificationReport:
    """dlog of the symbol side against (-1)^n sign(det L) times the cone
    pairing of the Fourier transform, exactly through degree D.

    L is the matrix of first columns; for positively oriented tuples the
    orientation factor is 1 and the check is the bare comparison identity.
    """
    t0 = time.perf_counter()
    n = f.n
    details = []
    lam = first_columns_matrix(gammas)
    orient = lam.sign()
    lhs = dlog_phi_st(gammas, f, D)
    rhs = phi_nsh(gammas, fourier(f), D).scaled(Q((-1) ** n * orient))
    ok = eq_fraction(lhs.coeff, rhs, D)
    disc = None if ok else fraction_discrepancy(lhs.coeff, rhs, D)
    details.append(
        _instance(
            "n=%d degree=%d orientation=%+d" % (n, D, orient),
            ok,
            disc,
            orientation_sign=orient,
        )
    )
    return VerificationReport(
        check="compare-main",
        inputs={
            "matrices": [matrix_to_json(g) for g in gammas],
            "f": f.to_json(),
            "degree": int(D),
        },
        passed=ok,
        details=details,
        runtime_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# randomized instance generators

def _rand_invertible(rng, n, lo=-2, hi=2):
    while True:
        m = QMatrix([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if m.det() != 0:
            return m


def _rand_coset_function(rng, n, max_mod=2, max_den=2):
    base = tuple(Q(rng.randint(0, 3), rng.choice(range(1, max_den + 1))) for _ in range(n))
    mod = (Q(rng.choice(range(1, max_mod + 1))),) * n
    return indicator(base, mod)


def _rand_tuple_with_independent_columns(rng, n, lo=-2, hi=2):
    while True:
        gs = [_rand_invertible(rng, n, lo, hi) for _ in range(n)]
        if first_columns_matrix(gs).det() != 0:
            return gs


# ---------------------------------------------------------------------------
# equivariance suite

def suite_equivariance(seed: int, n: int, trials: int, D=6) -> VerificationReport:
    """Randomized exact checks of the group-action identities: the cone
    evaluators' equivariance, Fourier-vs-action compatibility, the standard
    tuple factorization of the symbol dlog, the cone-level action, and one
    deliberately corrupted identity that must fail."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    details = []
    all_ok = True

    for k in range(trials):
        kind = k % 4
        if kind == 0:
            gs = _rand_tuple_with_independent_columns(rng, n)
            g = _rand_invertible(rng, n)
            f = fourier(_rand_coset_function(rng, n))
            try:
                lhs = phi_nsh([g @ gj for gj in gs], f, D)
                rhs = substitute(g, phi_nsh(gs, act_test(g.T, f), D))
            except DegenerateConeError:
                details.append(_instance("trial %d nsh-equivariance (degenerate, skipped)" % k, True))
                continue
            ok = eq_fraction(lhs, rhs, D)
            disc = None if ok else fraction_discrepancy(lhs, rhs, D)
            details.append(_instance("trial %d nsh-equivariance" % k, ok, disc))
        elif kind == 1:
            gs = _rand_tuple_with_independent_columns(rng, n)
            g = _rand_invertible(rng, n)
            f = fourier(_rand_coset_function(rng, n))
            try:
                lhs = phi_sh([g @ gj for gj in gs], f, D)
                rhs = substitute(g, phi_sh(gs, act_test(g.T, f), D)).scaled(g.sign())
            except DegenerateConeError:
                details.append(_instance("trial %d sh-equivariance (degenerate, skipped)" % k, True))
                continue
            ok = eq_fraction(lhs, rhs, D)
            disc = None if ok else fraction_discrepancy(lhs, rhs, D)
            details.append(_instance("trial %d sh-sign-equivariance" % k, ok, disc))
        elif kind == 2:
            g = _rand_invertible(rng, n)
            f = _rand_coset_function(rng, n)
            lhs = fourier(act_test(g, f))
            rhs = act_test(g.inv().T, fourier(f)).scaled(abs(g.det()))
            ok = lhs == rhs
            details.append(_instance("trial %d fourier-action" % k, ok))
        else:
            g = _rand_invertible(rng, n)
            f = _rand_coset_function(rng, n)
            rho = shift_permutation(n)
            tup = []
            cur = g
            for _ in range(n):
                tup.append(cur)
                cur = cur @ rho
            lhs = dlog_phi_st(tup, f, D)
            rho_tup = []
            cur = identity(n)
            for _ in range(n):
                rho_tup.append(cur)
                cur = cur @ rho
            rhs = substitute(g, dlog_phi_st(rho_tup, act_test(g.inv(), f), D))
            ok = eq_fraction(lhs.coeff, rhs.coeff, D)
            disc = None if ok else fraction_discrepancy(lhs.coeff, rhs.coeff, D)
            details.append(_instance("trial %d standard-tuple-factorization" % k, ok, disc))
        if details[-1]["status"] != "ok":
            all_ok = False

    # mutation sensitivity: dropping |det| from the Fourier-action identity
    # must be detected on some instance with |det| != 1
    mutated_detected = False
    for _ in range(50):
        g = _rand_invertible(rng, n)
        if abs(g.det()) == 1:
            continue
        f = _rand_coset_function(rng, n)
        lhs = fourier(act_test(g, f))
        rhs = act_test(g.inv().T, fourier(f))  # |det| deliberately dropped
        if lhs != rhs:
            mutated_detected = True
            break
    details.append(_instance("mutation check (dropped |det| factor detected)", mutated_detected))
    if not mutated_detected:
        all_ok = False

    return VerificationReport(
        check="suite-equivariance",
        inputs={"seed": seed, "n": n, "trials": trials, "degree": int(D)},
        passed=all_ok,
        details=details,
        runtime_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# cone suite

def _rho_tuple(n):
    rho = shift_permutation(n)
    out = [identity(n)]
    for _ in range(n - 1):
        out.append(out[-1] @ rho)
    return out


def suite_cone(n_max: int = 4) -> VerificationReport:
    """The shift-permutation tuple gives exactly the open positive orthant;
    the adjugate leading terms match the known table; the two-term coboundary
    of the perturbed cone function is constant in the argument."""
    t0 = time.perf_counter()
    details = []
    all_ok = True

    for n in range(1, n_max + 1):
        alphas = _rho_tuple(n)
        ev = sigma_evaluator(alphas)
        ok = True
        bad = None
        coords = [-1, 0, 1] if n >= 4 else [-1, 0, 1, Q(1, 2), 2]
        for w in iproduct(coords, repeat=n):
            if not any(w):
                continue
            expected = 1 if all(x > 0 for x in w) else 0
            if ev(w) != expected:
                ok, bad = False, w
                break
        details.append(_instance("orthant probe n=%d" % n, ok, None, bad_point=str(bad) if bad else None))
        if not ok:
            all_ok = False

    for n in range(2, n_max + 1):
        M = perturbation_matrix(_rho_tuple(n))
        det_ok = eps_sign(eps_det(M)) == 1
        adj = eps_adjugate(M)
        table_ok = True
        for k in range(1, n + 1):
            for i in range(1, n + 1):
                lm = adj[k - 1][i - 1].leading_monomial()
                lc = adj[k - 1][i - 1].terms[lm]
                if i == k:
                    good = lm == (0,) * n and lc == 1
                elif k == 1 or (k >= 2 and i > k):
                    exp = n - i + 1
                    want = [0] * n
                    want[i - 1] = exp
                    if k >= 2:
                        want[0] = k - 1
                    good = lm == tuple(want) and lc == (1 if k >= 2 else -1)
                else:
                    want = [0] * n
                    want[i - 1] = k - i
                    good = lm == tuple(want) and lc == -1
                if not good:
                    table_ok = False
        details.append(_instance("adjugate leading terms n=%d" % n, det_ok and table_ok))
        if not (det_ok and table_ok):
            all_ok = False

    # coboundary constancy at n=2
    rng = random.Random(271828)
    done = 0
    while done < 10:
        alphas = [_rand_invertible(rng, 2) for _ in range(3)]
        try:
            vals = set()
            count = 0
            while count < 50:
                w = (Q(rng.randint(-9, 9), rng.choice([1, 2, 3])), Q(rng.randint(-9, 9), rng.choice([1, 2, 3])))
                if not any(w):
                    continue
                v = (
                    sigma_evaluator([alphas[1], alphas[2]])(w)
                    - sigma_evaluator([alphas[0], alphas[2]])(w)
                    + sigma_evaluator([alphas[0], alphas[1]])(w)
                )
                vals.add(v)
                count += 1
            ok = len(vals) == 1
            details.append(_instance("coboundary constancy tuple %d (value %s)" % (done, sorted(vals)), ok))
            if not ok:
                all_ok = False
            done += 1
        except DegenerateConeError:
            continue

    return VerificationReport(
        check="suite-cone",
        inputs={"n_max": n_max},
        passed=all_ok,
        details=details,
        runtime_s=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# reciprocity and coboundary suites

def suite_reciprocity(seed: int, D=8) -> VerificationReport:
    t0 = time.perf_counter()
    rng = random.Random(seed)
    details = []
    all_ok = True
    for n in (2, 3):
        for d in (1, 2):
            a = tuple(Q(rng.randint(0, 2 * d), rng.choice([1, 2, 3])) for _ in range(n))
            units, partial = stevens_units(a, d, n)
            ok = dedekind_wedge_check(units, partial, D)
            details.append(_instance("n=%d d=%d a=%s" % (n, d, [str(x) for x in a]), ok))
            if not ok:
                all_ok = False
    return VerificationReport(
        check="suite-reciprocity",
        inputs={"seed": seed, "degree": int(D)},
        passed=all_ok,
        details=details,
        runtime_s=time.perf_counter() - t0,
    )


def suite_coboundary(seed: int, D=6) -> VerificationReport:
    t0 = time.perf_counter()
    rng = random.Random(seed)
    details = []
    all_ok = True
    cases = [((0, 0), 1, 2), ((Q(1, 3), Q(1, 2)), 1, 2), ((Q(1, 2), 0), 2, 2), ((0, 0, 0), 1, 3), ((0, 0, 0), 2, 3)]
    for _ in range(2):
        n = rng.choice([2, 3])
        d = rng.choice([1, 2])
        a = tuple(Q(rng.randint(0, 2), rng.choice([1, 2])) for _ in range(n))
        cases.append((a, d, n))
    for a, d, n in cases:
        deg = D if n == 2 else min(D, 5)
        A, R, ok = stevens_coboundary_check(a, d, n, deg)
        nonvacuous = not A.coeff.is_zero() or R.coeff.is_zero()
        details.append(
            _instance(
                "n=%d d=%s a=%s degree=%d" % (n, d, [str(Q(x)) for x in a], deg),
                ok and nonvacuous,
                None if ok else fraction_discrepancy(A.coeff, R.coeff, deg),
            )
        )
        if not (ok and nonvacuous):
            all_ok = False
    return VerificationReport(
        check="suite-coboundary",
        inputs={"seed": seed, "degree": int(D)},
        passed=all_ok,
        details=details,
        runtime_s=time.perf_counter() - t0,
    )


def suite_refinement(D=8) -> VerificationReport:
    """eta of a coset against its m-refined presentations at the dlog level,
    and structural refinement invariance of normalization."""
    t0 = time.perf_counter()
    details = []
    all_ok = True
    cases = [(Q(0), Q(1)), (Q(1, 3), Q(1)), (Q(1, 2), Q(2)), (Q(2, 3), Q(3))]
    for a, d in cases:
        for m in (2, 3, 4):
            direct = eta_of_cosets([(1, a, d)])
            refined = eta_of_cosets([(1, a + d * b, d * m) for b in range(m)])
            lhs = dlog_unit(direct, D)
            rhs = dlog_unit(refined, D)
            ok = all(eq_fraction(x, y, D) for x, y in zip(lhs.coeffs, rhs.coeffs))
            word_differs = direct != refined
            details.append(
                _instance("eta a=%s d=%s m=%d (distinct words, equal dlog)" % (a, d, m), ok and word_differs)
            )
            if not (ok and word_differs):
                all_ok = False
    # structural refinement invariance of the canonical form
    for a, d, m in [(Q(1, 3), Q(1), 2), (Q(1, 2), Q(2), 3)]:
        direct = indicator((a,), (d,))
        refined = normalize([(1, Coset((a + d * b,), (d * m,))) for b in range(m)])
        ok = direct == refined
        details.append(_instance("normalize refinement a=%s d=%s m=%d" % (a, d, m), ok))
        if not ok:
            all_ok = False
    return VerificationReport(
        check="suite-refinement",
        inputs={"degree": int(D)},
        passed=all_ok,
        details=details,
        runtime_s=time.perf_counter() - t0,
    )


def report_to_text(rep: VerificationReport) -> str:
    return rep.render_text()


def report_to_json_str(rep: VerificationReport) -> str:
    return json.dumps(rep.to_json(), indent=2, sort_keys=True)
