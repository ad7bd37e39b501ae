"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
Exact checks require exact equality; float checks use 1e-9 relative.
"""
import itertools
import sys
from fractions import Fraction

import pytest

from sasakiverify import kahler as kh
from sasakiverify import mtheory as mt
from sasakiverify.clifford import SpinorModule, ratio
from sasakiverify.exterior import ModelForm, flat, interior, wedge
from sasakiverify.sasaki import SasakiModel, flat_model
from sasakiverify.scalars import I, NoRealSolution, QuadScalar

R2, R3, R6 = mt.R2, mt.R3, mt.R6
XI = 10
TOL = 1e-9
SEEDS = range(20)

_cache = {}


def background():
    if not _cache:
        m = flat_model()
        lam = mt.solve_lambda(5, -1)
        f = mt.FluxAnsatz(lam, m.space)
        p = mt.p_form(m)
        beta = mt.solve_beta(m, f, p)
        sol = mt.solve_mu_constants(m, f, beta, p)
        _cache.update(m=m, lam=lam, f=f, p=p, beta=beta, sol=sol,
                      c=mt.ConnectionConstants(beta, sol.mu1, sol.mu2))
    return _cache


def w(space, k):
    return ModelForm.omega_power(space, k, QuadScalar(1))


# ---------------------------------------------------------------------------
# criteria; each returns (passed, detail)
# ---------------------------------------------------------------------------


def c1_einstein():
    b = background()
    E = mt.einstein_residual(b["m"], b["f"])
    lam_sq = b["lam"] * b["lam"]
    flux = Fraction(-1, 3) * (-1) * 5 * 4 * lam_sq
    ok = E.is_zero and len(E.pairs()) == 66 and E.ricci_xi_xi == 10 and flux == 10
    return ok, f"66 pairs, max residual {E.max_abs}, Ric(xi,xi) = {E.ricci_xi_xi}"


def c2_lorentzian():
    try:
        mt.solve_lambda(5, 1)
        raised = ""
    except NoRealSolution as exc:
        raised = str(exc)
    lam = mt.solve_lambda(5, -1)
    return "no real solution" in raised and lam == R6 / 2, f"eps=+1: {raised!r}; eps=-1: lambda = {lam}"


def c3_general_n():
    lam_sq = QuadScalar(Fraction(7, 3))
    trials = 0
    for n, eps in itertools.product(range(2, 7), (-1, 1)):
        c = Fraction(1, 3) * (6 - n) * (n - 1) * lam_sq + 2 * eps
        if mt.einstein_horizontal_coefficient(n, eps, lam_sq) != c:
            return False, f"coefficient mismatch at n={n}, eps={eps}"
        for shift in (0, 1, Fraction(-1, 2)):
            m = SasakiModel(kh.constant_holomorphic(n, c.a + shift), eps)
            block = mt.einstein_residual(m, lam_sq=lam_sq).matrix[: 2 * n, : 2 * n]
            if all(not x for x in block.flat) != (shift == 0):
                return False, f"iff fails at n={n}, eps={eps}, shift={shift}"
            trials += 1
        sq = mt.solve_lambda_sq(n, eps)
        if mt.einstein_horizontal_coefficient(n, eps, sq) != 2 * eps * (n - 5):
            return False, f"substituted coefficient wrong at n={n}, eps={eps}"
        m = SasakiModel(kh.constant_holomorphic(n, 2 * eps * (n - 5)), eps)
        if not mt.einstein_residual(m, lam_sq=sq).is_zero:
            return False, f"full Einstein residual nonzero at n={n}, eps={eps}"
        m = SasakiModel(kh.constant_holomorphic(n, 2 * eps * (n - 5) + 1), eps)
        if mt.einstein_residual(m, lam_sq=sq).is_zero:
            return False, f"wrong c accepted at n={n}, eps={eps}"
    return True, f"n=2..6, both eps, {trials} synthetic Ric_h = c h bases"


def c4_maxwell():
    b = background()
    res = mt.maxwell_residual(b["m"], b["f"])
    coeff = mt.omega4_coefficient(res)
    ok = coeff == R6 / 3 + Fraction(3, 4) and res == w(b["m"].space, 4).scale(coeff) and not res.is_zero()
    return ok, f"d*F + F^F/2 = ({coeff}) w^4"


def c5_trace_forms():
    m = background()["m"]
    t2, t4 = mt.trace_forms_on_M(m, 1), mt.trace_forms_on_M(m, 2)
    if not (t2.direct == w(m.space, 2).scale(-8) and t4.direct == w(m.space, 4).scale(Fraction(8, 105))):
        return False, "flat trace forms wrong"
    if not (t2.agree and t4.agree):
        return False, "flat closed form disagrees"
    worst = 0.0
    for seed in SEEDS:
        for exact in (True, False):
            mr = SasakiModel(kh.random_kahler_curvature(seed, exact=exact), -1)
            for k in (1, 2):
                cmp = mt.trace_forms_on_M(mr, k)
                if exact and not cmp.agree:
                    return False, f"exact mismatch seed={seed} k={k}: {cmp.difference}"
                if not exact:
                    if not cmp.agree_within(TOL):
                        return False, f"float mismatch seed={seed} k={k}: {cmp.difference}"
                    worst = max(worst, cmp.difference / max(1.0, cmp.direct.max_abs()))
    return True, f"flat -8 w^2, 8/105 w^4; {len(SEEDS)} seeds exact, float max rel {worst:.2e}"


def c6_pontryagin():
    b = background()
    if b["p"] != w(b["m"].space, 4).scale(Fraction(-6688, 105)):
        return False, f"p = {b['p']}"
    for seed in range(5):
        pd = mt.pontryagin(SasakiModel(kh.random_kahler_curvature(seed), -1))
        if pd.identity_residual != 0:
            return False, f"identity residual {pd.identity_residual} at seed {seed}"
    return True, "p = -(6688/105) w^4; 64 pi^4 (p1^2 - 4 p2) identity on 5 random seeds"


def c7_beta():
    b = background()
    c0 = mt.ConnectionConstants(b["beta"], QuadScalar(0), QuadScalar(0))
    res = mt.corrected_maxwell_residual(b["m"], b["f"], c0, b["p"])
    ok = b["beta"] == Fraction(105, 6688) * (R6 / 3 + Fraction(3, 4)) == mt.PAPER_BETA and res.is_zero()
    return ok, f"beta = {b['beta']}, corrected residual zero: {res.is_zero()}"


def c8_spinor_table():
    M = SpinorModule()
    sp = M.space
    for a, c in itertools.product(range(11), repeat=2):
        ea, ec = M.generator(a), M.generator(c)
        if ea @ ec + ec @ ea != M.identity().scale(-2 * sp.metric(a, c)):
            return False, f"Clifford relation fails at ({a},{c})"
    for eps in (-1, 1):
        me = SasakiModel(kh.flat(5), eps)
        for S in M.basis:
            if me.spinors.eigenvalue(me.phi_spin, me.spinors.basis_spinor(S)) != I * Fraction(eps * (5 - 2 * len(S)), 2):
                return False, f"Phi eigenvalue wrong on {S}, eps={eps}"
    phis = (M.phi_plus, M.phi_minus)
    om2, om4 = M.act_form(w(sp, 2)), M.act_form(w(sp, 4))
    if any(M.eigenvalue(om2, ph) != -20 or M.eigenvalue(om4, ph) != 120 for ph in phis):
        return False, "w^2 / w^4 eigenvalues"
    for label in range(1, 11):
        X = sp.basis_vector(label)
        for ph in phis:
            Xph = M.act_vector(X).apply(ph)
            got = [ratio(M.act_form(op).apply(ph), Xph) for op in
                   (interior(X, w(sp, 2)), wedge(flat(X), w(sp, 2)), interior(X, w(sp, 4)), wedge(flat(X), w(sp, 4)))]
            if got != [8, -12, -96, 24]:
                return False, f"contraction coefficients {got} at e{label}"
    return True, "121 Clifford pairs, Phi eigenvalues for both eps, -20/120, coefficients 8, -12, -96, 24"


def c9_gks():
    b = background()
    m = b["m"]
    S = m.spinors
    for ph in (S.phi_plus, S.phi_minus):
        rep = m.gks_verify(ph)
        if not (rep.passed and rep.max_residual == 0):
            return False, "gks_verify residual"
        for a in range(10):
            U = m.frame_vector(a)
            if m.gamma_trace(U, ph) != S.act_vector(U).apply(ph).scale(-1):
                return False, f"gamma trace horizontal e{a}"
        if m.gamma_trace(m.frame_vector(XI), ph) != S.generator(XI).apply(ph).scale(5):
            return False, "gamma trace xi"
    for c in (-3, -1, 0, 2, Fraction(1, 2)):
        mc = SasakiModel(kh.constant_holomorphic(5, c), -1)
        Sc = mc.spinors
        for a in (0, 6):
            U = mc.frame_vector(a)
            obs = mc.gks_obstruction(U, Sc.phi_plus)
            if obs != Sc.act_vector(U).apply(Sc.phi_plus).scale(Fraction(-1, 2) * c) or obs.is_zero() != (c == 0):
                return False, f"obstruction wrong at c={c}"
    return True, "phi_+- GKS, gamma trace eps U / -n eps xi, obstruction -c/2 U.phi"


def c10_nabla_o():
    b = background()
    m, f = b["m"], b["f"]
    S = m.spinors
    vx = 5 * I * (Fraction(1, 2) - 1 / R6)
    vh = I * (R2 - R3) / (2 * R3)
    for sign, ph in ((1, S.phi_plus), (-1, S.phi_minus)):
        if ratio(mt.nabla_o(m, m.frame_vector(XI), ph, f), ph) != vx * sign:
            return False, "xi value"
        for a in range(10):
            X = m.frame_vector(a)
            if ratio(mt.nabla_o(m, X, ph, f), S.act_vector(X).apply(ph)) != vh:
                return False, f"horizontal value e{a}"
    return True, f"xi: +-({vx}); horizontal: {vh}"


def c11_susy():
    b = background()
    sol = b["sol"]
    res = mt.parallel_residuals(b["m"], b["f"], b["c"], b["p"])
    rec = sol.to_json()
    ok = (set(res.values()) == {0.0} and len(res) == 11 and sol.mu2 == mt.PAPER_MU2
          and rec["mu1_paper"] and rec["mu1_solved"] and sol.residual_paper is not None)
    return ok, (f"11 directions zero; mu2 = {sol.mu2}; mu1 solved {sol.mu1} vs printed {mt.PAPER_MU1}, "
                f"printed-mu1 residual {sol.residual_paper:.6g}")


def c12_majorana():
    b = background()
    M = b["m"].spinors
    j = M.majorana_j
    xi = M.generator(XI)
    for S in M.basis:
        ph = M.basis_spinor(S)
        if j(j(ph)) != ph:
            return False, f"j^2 on {S}"
        if j(xi.apply(ph)) != -xi.apply(j(ph)) or M.star(xi.apply(ph)) != -xi.apply(M.star(ph)):
            return False, "xi relation"
        p = len(S)
        for i in range(5):
            if j(M.u(i).apply(ph)) != -M.ubar(i).apply(j(ph)):
                return False, "j u relation"
            if j(M.ubar(i).apply(ph)) != -M.u(i).apply(j(ph)):
                return False, "j ubar relation"
            if M.star(M.u(i).apply(ph)) != M.ubar(i).apply(M.star(ph)).scale(2 * (-1) ** p):
                return False, "star u relation"
            if M.star(M.ubar(i).apply(ph)) != M.u(i).apply(M.star(ph)).scale(Fraction((-1) ** (p + 1), 2)):
                return False, "star ubar relation"
    if M.homogeneous_degree(j(M.basis_spinor(()))) != 5:
        return False, "j(Lambda^0) not in Lambda^5"
    phi = M.pseudo_majorana_combination(M.phi_plus, M.phi_minus)
    res = mt.parallel_residuals(b["m"], b["f"], b["c"], b["p"], spinors=[phi])
    ok = not phi.is_zero() and j(phi) == phi and set(res.values()) == {0.0}
    return ok, "j^2 = Id and the j/star relations on all 32 basis spinors; real combination parallel"


def c13_oracles():
    m = background()["m"]
    k = m.koszul_oracle()
    vals = {"koszul": max(k.values()), "spin_connection": m.spin_connection_oracle(),
            "ricci": m.ricci_agreement(), "switch": m.switch_relation_residual()}
    return all(v == 0 for v in vals.values()), ", ".join(f"{a} {v}" for a, v in vals.items())


CRITERIA = [
    (1, "Einstein solution", c1_einstein),
    (2, "Lorentzian necessity", c2_lorentzian),
    (3, "general-n Einstein condition", c3_general_n),
    (4, "classical Maxwell failure", c4_maxwell),
    (5, "trace forms", c5_trace_forms),
    (6, "Pontryagin form", c6_pontryagin),
    (7, "beta and corrected Maxwell", c7_beta),
    (8, "spinor algebra table", c8_spinor_table),
    (9, "GKS suite", c9_gks),
    (10, "nabla-o values", c10_nabla_o),
    (11, "supersymmetry", c11_susy),
    (12, "Majorana layer", c12_majorana),
    (13, "oracles", c13_oracles),
]


def evaluate(fn):
    try:
        return fn()
    except Exception as exc:  # a crash is a failure, reported as such
        return False, f"{type(exc).__name__}: {exc}"


def line(num, name, ok, detail):
    return f"{'PASS' if ok else 'FAIL'} criterion {num}: {name} ({detail})"


# ---------------------------------------------------------------------------
# pytest entry
# ---------------------------------------------------------------------------


class TestAcceptance:
    @pytest.mark.parametrize("num, name, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
    def test_criterion(self, capsys, num, name, fn):
        ok, detail = evaluate(fn)
        with capsys.disabled():
            print("\n" + line(num, name, ok, detail))
        assert ok, detail


if __name__ == "__main__":
    results = [(num, name, *evaluate(fn)) for num, name, fn in CRITERIA]
    for r in results:
        print(line(*r))
    sys.exit(0 if all(r[2] for r in results) else 1)
