"""Field equations on the Sasakian model and the first-order corrections.

Flux ansatz ``F = lam pi*omega^2``.  Checks cover the Einstein equation
``Ric(X,Y) = 1/2 g(iota_X F, iota_Y F) - 1/6 g(X,Y) g(F,F)``, the classical
and corrected Maxwell equations ``d*F + 1/2 F^F = -beta p(M,g)``, the trace
forms of the total space, and parallel spinors for the supergravity
connection and its beta-correction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .clifford import Spinor, SpinorModule, ratio
from .exterior import FrameVector, ModelForm, flat, hodge, inner, interior, model_d, wedge
from .sasaki import SasakiModel
from .scalars import (
    CScalar,
    NoRealSolution,
    QuadScalar,
    ScalarError,
    format_complex,
    parse_quad,
    qf_sqrt_of_rational,
)

R2 = QuadScalar(0, 1)
R3 = QuadScalar(0, 0, 1)
R6 = QuadScalar(0, 0, 0, 1)

PAPER_BETA = QuadScalar(Fraction(105, 6688)) * (R6 / 3 + Fraction(3, 4))
PAPER_MU1 = 1 - (1 + 489 * R6) / 1200
PAPER_MU2 = Fraction(1, 12) * (R3 - R2) / (3 * R3 + 4 * R2)


class MTheoryError(ValueError):
    pass


class BetaUnsolvable(MTheoryError):
    pass


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FluxAnsatz:
    """F = lam pi*omega^2 on a given frame space."""

    lam: QuadScalar
    space: object

    @property
    def F(self) -> ModelForm:
        return ModelForm.omega_power(self.space, 2, QuadScalar(1)).scale(self.lam)

    def invariants(self) -> dict:
        F = self.F
        xi = self.space.basis_vector("xi", Fraction(1))
        return {"closed": model_d(F).is_zero(), "iota_xi_zero": interior(xi, F).is_zero()}


@dataclass(frozen=True)
class ConnectionConstants:
    beta: QuadScalar
    mu1: QuadScalar
    mu2: QuadScalar

    def __post_init__(self):
        if _qs(self.beta).sign() < 0:
            raise MTheoryError("beta must be nonnegative")

    @classmethod
    def paper(cls) -> ConnectionConstants:
        return cls(PAPER_BETA, PAPER_MU1, PAPER_MU2)

    def to_json(self) -> dict:
        return {"beta": str(self.beta), "mu1": str(self.mu1), "mu2": str(self.mu2)}


def _qs(x) -> QuadScalar:
    return x if isinstance(x, QuadScalar) else QuadScalar.from_rational(x)


def residual_literal(x) -> str:
    if isinstance(x, CScalar):
        return format_complex(x)
    if isinstance(x, (QuadScalar, int, Fraction)):
        return str(_qs(x))
    return repr(float(x))


@dataclass
class BackgroundReport:
    """Per-check entries ``{check, status, residual, details}``."""

    backend: str = "exact"
    entries: list = field(default_factory=list)

    def add(self, check: str, passed: bool, residual, details: dict | None = None):
        self.entries.append({
            "check": check,
            "status": "pass" if passed else "fail",
            "residual": residual if isinstance(residual, str) else residual_literal(residual),
            "details": details or {},
        })
        return passed

    @property
    def passed(self) -> bool:
        return all(e["status"] == "pass" for e in self.entries)

    def failures(self) -> list:
        return [e["check"] for e in self.entries if e["status"] != "pass"]

    def extend(self, other: BackgroundReport):
        self.entries.extend(other.entries)

    def to_json(self) -> dict:
        return {"backend": self.backend, "passed": self.passed, "entries": self.entries}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Einstein equation
# ---------------------------------------------------------------------------


@dataclass
class EinsteinResidual:
    matrix: np.ndarray
    lam_sq: QuadScalar
    ricci_xi_xi: object
    flux_xi_xi: QuadScalar

    @property
    def max_abs(self) -> float:
        return max(abs(float(x)) for x in self.matrix.flat)

    @property
    def is_zero(self) -> bool:
        return all(not x for x in self.matrix.flat)

    def pairs(self):
        d = self.matrix.shape[0]
        return [(a, b, self.matrix[a, b]) for a in range(d) for b in range(a, d)]


def _flux_quadratics(m: SasakiModel):
    """g(iota_a w2, iota_b w2) and g(w2, w2) for w2 = pi*omega^2."""
    sp = m.space
    w2 = ModelForm.omega_power(sp, 2)
    d = m.dim
    contr = [interior(sp.basis_vector(a + 1 if a < 2 * m.n else "xi"), w2) for a in range(d)]
    Q = np.empty((d, d), dtype=object)
    for a in range(d):
        for b in range(d):
            Q[a, b] = Fraction(inner(contr[a], contr[b]))
    return Q, Fraction(inner(w2, w2))


def einstein_residual(m: SasakiModel, f: FluxAnsatz | None = None, lam_sq=None) -> EinsteinResidual:
    """Ric(X,Y) - 1/2 g(iota_X F, iota_Y F) + 1/6 g(X,Y) g(F,F) on frame pairs.

    ``lam_sq`` may replace ``f`` so that irrational lam (e.g. n = 6) is covered.
    """
    if lam_sq is None:
        if f is None:
            raise MTheoryError("either a flux ansatz or lam_sq is required")
        lam_sq = f.lam * f.lam
    lam_sq = _qs(parse_quad(lam_sq) if isinstance(lam_sq, str) else lam_sq)
    if not m.exact:
        raise MTheoryError("einstein_residual runs in the exact backend")
    Q, q = _flux_quadratics(m)
    Ric = m.ricci()
    g = m.metric
    d = m.dim
    E = np.empty((d, d), dtype=object)
    for a in range(d):
        for b in range(d):
            E[a, b] = _qs(Ric[a, b]) - lam_sq * (Q[a, b] / 2) + lam_sq * (g[a, b] * q / 6)
    xi = m.xi
    flux_xi = lam_sq * (Q[xi, xi] / 2) - lam_sq * (g[xi, xi] * q / 6)
    return EinsteinResidual(E, lam_sq, Ric[xi, xi], flux_xi)


def einstein_horizontal_coefficient(n: int, epsilon: int, lam_sq) -> QuadScalar:
    """c such that the horizontal Einstein block vanishes iff Ric_h = c h."""
    return _qs(lam_sq) * Fraction((6 - n) * (n - 1), 3) + 2 * epsilon


def solve_lambda_sq(n: int, epsilon: int) -> Fraction:
    if n < 2:
        raise MTheoryError("lambda is undetermined for n = 1 (division by n - 1)")
    return Fraction(-6 * epsilon, n - 1)


def solve_lambda(n: int, epsilon: int) -> QuadScalar:
    """Positive root of lam^2 = -6 eps/(n-1); no real root when eps = +1."""
    lam_sq = solve_lambda_sq(n, epsilon)
    if lam_sq < 0:
        raise NoRealSolution("no real solution: lambda^2 < 0, the metric must be Lorentzian")
    return qf_sqrt_of_rational(lam_sq)


# ---------------------------------------------------------------------------
# Maxwell and Pontryagin
# ---------------------------------------------------------------------------


def _require_eleven(m: SasakiModel):
    if m.n != 5 or m.epsilon != -1:
        raise MTheoryError("this check is defined for n = 5, eps = -1")


def maxwell_residual(m: SasakiModel, f: FluxAnsatz) -> ModelForm:
    """d*F + 1/2 F ^ F."""
    _require_eleven(m)
    F = f.F
    return model_d(hodge(F)) + wedge(F, F).scale(Fraction(1, 2))


def omega4(m: SasakiModel) -> ModelForm:
    return ModelForm.omega_power(m.space, 4, QuadScalar(1))


def omega4_coefficient(form: ModelForm):
    """c with form = c pi*omega^4, or None."""
    if form.is_zero():
        return QuadScalar(0)
    vals = list(form.alpha0.values()) + list(form.alpha1.values())
    one = 1.0 if any(isinstance(v, float) for v in vals) else QuadScalar(1)
    return form.proportionality(ModelForm.omega_power(form.space, 4, one))


@dataclass
class TraceFormComparison:
    k: int
    direct: ModelForm
    closed: ModelForm
    difference: float

    @property
    def agree(self) -> bool:
        return self.difference == 0.0

    def agree_within(self, tol: float) -> bool:
        scale = max(1.0, self.direct.max_abs())
        return self.difference <= tol * scale


def trace_forms_on_M(m: SasakiModel, k: int, path: str = "wedge") -> TraceFormComparison:
    direct = m.trace_form_on_M(k, path)
    closed = m.trace_form_closed(k)
    return TraceFormComparison(k, direct, closed, (direct - closed).max_abs())


@dataclass(frozen=True)
class PiForm:
    """A form times pi^power, keeping Pontryagin normalisations exact."""

    form: ModelForm
    power: int

    def wedge(self, other: PiForm) -> PiForm:
        return PiForm(wedge(self.form, other.form), self.power + other.power)

    def scale(self, c) -> PiForm:
        return PiForm(self.form.scale(c), self.power)

    def __sub__(self, other: PiForm) -> PiForm:
        if self.power != other.power:
            raise MTheoryError("cannot subtract forms with different powers of pi")
        return PiForm(self.form - other.form, self.power)

    def times_pi(self, k: int) -> PiForm:
        return PiForm(self.form, self.power + k)


@dataclass
class PontryaginData:
    p1: PiForm
    p2: PiForm
    p: ModelForm
    identity_residual: float


def pontryagin(m: SasakiModel, path: str = "wedge") -> PontryaginData:
    t2 = m.trace_form_on_M(1, path)
    t4 = m.trace_form_on_M(2, path)
    conv = m._form_scalar
    p1 = PiForm(t2.scale(conv(Fraction(-1, 8))), -2)
    p2 = PiForm((wedge(t2, t2) - t4.scale(conv(2))).scale(conv(Fraction(1, 128))), -4)
    combo = (p1.wedge(p1) - p2.scale(conv(4))).scale(conv(64)).times_pi(4)
    if combo.power != 0:
        raise MTheoryError("pi units did not cancel")
    p = t4.scale(conv(4)) - wedge(t2, t2)
    return PontryaginData(p1, p2, p, (combo.form - p).max_abs())


def p_form(m: SasakiModel) -> ModelForm:
    """p(M, g) = 4 Tr R^4 - (Tr R^2)^2."""
    return pontryagin(m).p


def corrected_maxwell_residual(m: SasakiModel, f: FluxAnsatz, c: ConnectionConstants,
                               p: ModelForm | None = None) -> ModelForm:
    """d*F + 1/2 F ^ F + beta p(M, g)."""
    p = p_form(m) if p is None else p
    return maxwell_residual(m, f) + p.scale(c.beta)


def solve_beta(m: SasakiModel, f: FluxAnsatz, p: ModelForm | None = None) -> QuadScalar:
    """The beta with d*F + 1/2 F ^ F = -beta p(M, g); it must be nonnegative."""
    p = p_form(m) if p is None else p
    lhs = maxwell_residual(m, f)
    if p.is_zero():
        raise BetaUnsolvable("p(M, g) vanishes: beta is undetermined")
    coeff = lhs.proportionality(p) if not lhs.is_zero() else QuadScalar(0)
    if coeff is None:
        raise BetaUnsolvable("d*F + 1/2 F^F is not a multiple of p(M, g)")
    beta = -coeff
    if beta.sign() < 0:
        raise BetaUnsolvable(f"no nonnegative beta: the solution is beta = {beta}")
    return beta


# ---------------------------------------------------------------------------
# spinor connections
# ---------------------------------------------------------------------------


def _frame_vec(m: SasakiModel, a: int) -> FrameVector:
    return m.frame_vector(a)


def _spin(m: SasakiModel) -> SpinorModule:
    return m.spinors


def flux_term(m: SasakiModel, X: FrameVector, f: FluxAnsatz):
    """Operator i (1/6 iota_X F + 1/12 X^flat ^ F)."""
    S = _spin(m)
    F = f.F
    Xq = _qvec(X)
    op = S.act_form(interior(Xq, F).scale(Fraction(1, 6))) + S.act_form(wedge(flat(Xq), F).scale(Fraction(1, 12)))
    return op.scale(S.i)


def _qvec(X: FrameVector) -> FrameVector:
    return FrameVector(X.space, tuple(_qs(c) if not isinstance(c, QuadScalar) else c for c in X.comps))


def nabla_o(m: SasakiModel, X: FrameVector, phi: Spinor, f: FluxAnsatz | None) -> Spinor:
    """Supergravity derivative nabla_X phi + i (1/6 iota_X F + 1/12 X^flat ^ F) phi."""
    base = m.spinor_covariant_derivative(X, phi, path="connection")
    if f is None or not f.lam:
        return base
    return base + flux_term(m, X, f).apply(phi)


def correction_ops(m: SasakiModel, X: FrameVector, p: ModelForm):
    """Operators i iota_X p and i X^flat ^ p (before beta, mu)."""
    S = _spin(m)
    Xq = _qvec(X)
    return S.act_form(interior(Xq, p)).scale(S.i), S.act_form(wedge(flat(Xq), p)).scale(S.i)


def nabla_beta(m: SasakiModel, X: FrameVector, phi: Spinor, f: FluxAnsatz, c: ConnectionConstants,
               p: ModelForm | None = None) -> Spinor:
    """nabla^o_X phi + i beta (mu1 iota_X p + mu2 X^flat ^ p) phi."""
    out = nabla_o(m, X, phi, f)
    if not c.beta:
        return out
    p = p_form(m) if p is None else p
    A1, A2 = correction_ops(m, X, p)
    op = (A1.scale(m.backend.complex(c.mu1)) + A2.scale(m.backend.complex(c.mu2))).scale(m.backend.complex(c.beta))
    return out + op.apply(phi)


@dataclass
class MuSolution:
    mu1: QuadScalar
    mu2: QuadScalar
    horizontal_combination: QuadScalar
    paper_mu1: QuadScalar
    paper_mu2: QuadScalar
    residual_solved: float
    residual_paper: float
    residual_paper_by_direction: dict

    @property
    def mu2_matches_paper(self) -> bool:
        return self.mu2 == self.paper_mu2

    @property
    def mu1_matches_paper(self) -> bool:
        return self.mu1 == self.paper_mu1

    def to_json(self) -> dict:
        return {
            "mu1_solved": str(self.mu1),
            "mu1_solved_float": float(self.mu1),
            "mu1_paper": str(self.paper_mu1),
            "mu1_paper_float": float(self.paper_mu1),
            "mu1_matches_paper": self.mu1_matches_paper,
            "mu2_solved": str(self.mu2),
            "mu2_solved_float": float(self.mu2),
            "mu2_paper": str(self.paper_mu2),
            "mu2_matches_paper": self.mu2_matches_paper,
            "horizontal_combination_96mu1_minus_24mu2": str(self.horizontal_combination),
            "residual_with_solved_constants": self.residual_solved,
            "residual_with_paper_mu1": self.residual_paper,
            "residual_with_paper_mu1_by_direction": self.residual_paper_by_direction,
            "note": "corrections acting identically on the parallel spinors are equivalent; "
                    "this is one representative of that class",
        }


def _solve_scalar(target: Spinor, coeff: Spinor):
    """mu with target + mu * coeff = 0, or None if inconsistent."""
    r = ratio(target, coeff)
    return None if r is None else -r


def _real_part(z) -> QuadScalar:
    if isinstance(z, CScalar):
        if z.im:
            raise MTheoryError(f"constant solved to a non-real value {z}")
        return z.re
    return z


def solve_mu_constants(m: SasakiModel, f: FluxAnsatz, beta: QuadScalar,
                       p: ModelForm | None = None) -> MuSolution:
    """Solve the two linear cancellation conditions for mu2 (xi) and mu1 (horizontal)."""
    _require_eleven(m)
    if not m.base.is_zero():
        raise MTheoryError("solve_mu_constants needs the flat admissible base")
    p = p_form(m) if p is None else p
    S = _spin(m)
    bc = m.backend.complex(beta)
    xi = _frame_vec(m, m.xi)
    phis = (S.phi_plus, S.phi_minus)
    mu2 = None
    for phi in phis:
        r0 = nabla_o(m, xi, phi, f)
        A1, A2 = correction_ops(m, xi, p)
        if not A1.apply(phi).is_zero():
            raise MTheoryError("iota_xi p does not annihilate the spinor")
        val = _solve_scalar(r0, A2.apply(phi).scale(bc))
        if val is None or (mu2 is not None and val != mu2):
            raise MTheoryError("xi-direction cancellation is inconsistent")
        mu2 = val
    mu2 = _real_part(mu2)
    mu1 = None
    for phi in phis:
        for a in range(2 * m.n):
            X = _frame_vec(m, a)
            A1, A2 = correction_ops(m, X, p)
            r0 = nabla_o(m, X, phi, f) + A2.apply(phi).scale(bc * mu2)
            val = _solve_scalar(r0, A1.apply(phi).scale(bc))
            if val is None or (mu1 is not None and val != mu1):
                raise MTheoryError("horizontal cancellation is inconsistent")
            mu1 = val
    mu1 = _real_part(mu1)
    solved = ConnectionConstants(beta, mu1, mu2)
    paper = ConnectionConstants(beta, PAPER_MU1, mu2)
    res_solved = parallel_residuals(m, f, solved, p)
    res_paper = parallel_residuals(m, f, paper, p)
    return MuSolution(mu1, mu2, 96 * mu1 - 24 * mu2, PAPER_MU1, PAPER_MU2,
                      max(res_solved.values()), max(res_paper.values()), res_paper)


def parallel_residuals(m: SasakiModel, f: FluxAnsatz, c: ConnectionConstants, p: ModelForm | None = None,
                       spinors=None) -> dict:
    """max |nabla^beta_X phi| per frame direction over the given spinors (default phi_+, phi_-)."""
    S = _spin(m)
    p = p_form(m) if p is None else p
    spinors = spinors if spinors is not None else (S.phi_plus, S.phi_minus)
    out = {}
    for a in range(m.dim):
        X = _frame_vec(m, a)
        label = "xi" if a == m.xi else str(a + 1)
        out[label] = max(nabla_beta(m, X, phi, f, c, p).max_abs() for phi in spinors)
    return out


def susy_verify(m: SasakiModel, f: FluxAnsatz, c: ConnectionConstants, phi: Spinor | None = None,
                p: ModelForm | None = None) -> BackgroundReport:
    """Pseudo-Majorana parallel spinor check for the corrected connection."""
    _require_eleven(m)
    if c is None:
        raise MTheoryError("connection constants are required")
    S = _spin(m)
    p = p_form(m) if p is None else p
    report = BackgroundReport(m.backend.name)
    if phi is None:
        phi = S.pseudo_majorana_combination(S.phi_plus, S.phi_minus)
    if phi.is_zero():
        raise MTheoryError("the spinor must be nonzero")
    j_res = (S.majorana_j(phi) - phi).max_abs()
    report.add("susy.reality", j_res == 0.0, j_res, {"spinor": phi.to_json()})
    res = parallel_residuals(m, f, c, p, spinors=(phi,))
    worst = max(res.values())
    report.add("susy.parallel", worst == 0.0, worst, {"by_direction": res, "constants": c.to_json()})
    return report
