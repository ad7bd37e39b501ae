"""Pointwise model of a Sasakian manifold over a Kaehler base.

All fields are invariant: constant coefficients in the adapted frame
(e_1..e_2n, xi).  The base frame is taken normal at the point, so base
Christoffel symbols drop out and only the base curvature enters.  The
curvature convention is ``R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``, stored
as ``R[a, b, c, d]`` = d-th component of ``R(e_a, e_b) e_c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kahler as kh
from .clifford import Spinor, SpinorModule
from .exterior import FrameSpace, FrameVector, ModelForm, dense_to_modelform, horizontal_to_modelform
from .scalars import EXACT, FloatBackend, QuadScalar


class SasakiError(ValueError):
    pass


def _zeros(shape, exact: bool):
    if exact:
        out = np.empty(shape, dtype=object)
        out.flat[:] = [Fraction(0)] * out.size
        return out
    return np.zeros(shape)


def _max_abs(arr) -> float:
    return kh.max_abs(np.asarray(arr))


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------


class SasakiModel:
    """(n, epsilon, base curvature) with the induced total-space geometry."""

    def __init__(self, base: kh.KahlerCurvature, epsilon: int = -1, backend=None):
        self.base = base
        self.space = FrameSpace(base.n, epsilon)
        self.n = base.n
        self.epsilon = epsilon
        self.exact = base.exact
        if backend is None:
            backend = EXACT if self.exact else FloatBackend()
        self.backend = backend

    def __repr__(self):
        return f"SasakiModel(n={self.n}, epsilon={self.epsilon}, exact={self.exact})"

    def __eq__(self, other):
        if not isinstance(other, SasakiModel):
            return NotImplemented
        return self.epsilon == other.epsilon and self.base == other.base

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    @property
    def xi(self) -> int:
        return 2 * self.n

    def _num(self, x):
        if not self.exact:
            return float(x)
        return Fraction(int(x)) if isinstance(x, (int, np.integer)) else Fraction(x)

    # -- structure tensors --------------------------------------------------
    @cached_property
    def metric(self):
        g = _zeros((self.dim, self.dim), self.exact)
        for a in range(self.dim):
            g[a, a] = self._num(self.space.metric(a, a))
        return g

    @cached_property
    def phi_matrix(self):
        """Phi with columns Phi(e_a): Phi|_H = eps J, Phi(xi) = 0."""
        P = _zeros((self.dim, self.dim), self.exact)
        J = kh.j_matrix(self.n)
        d = 2 * self.n
        P[:d, :d] = J * self.epsilon
        if self.exact:
            P = np.vectorize(self._num, otypes=[object])(P)
        return P

    def phi(self, X: FrameVector) -> FrameVector:
        P = self.phi_matrix
        comps = tuple(sum((P[r, c] * X.comps[c] for c in range(self.dim) if X.comps[c]), 0 * P[0, 0])
                      for r in range(self.dim))
        return FrameVector(self.space, comps)

    def eta(self, X: FrameVector):
        return X.comps[-1]

    def vector(self, comps) -> FrameVector:
        return FrameVector(self.space, tuple(self._num(c) if not isinstance(c, QuadScalar) else c for c in comps))

    def frame_vector(self, a: int) -> FrameVector:
        return FrameVector(self.space, tuple(self._num(1 if k == a else 0) for k in range(self.dim)))

    def structure_residuals(self) -> dict:
        """Defining identities of the structure on frame vectors.

        Phi^2 = -Id + eta x xi (eta = eps g(xi, .)), g(Phi, Phi) = g - eps eta x eta,
        Phi = -nabla xi, (nabla_X Phi)Y = eps g(X,Y) xi - eps g(xi,Y) X, d eta = -2 pi*omega.
        """
        P = self.phi_matrix
        g = self.metric
        d = self.dim
        eta_xi = _zeros((d, d), self.exact)
        eta_xi[self.xi, self.xi] = self._num(1)
        ident = _zeros((d, d), self.exact)
        for a in range(d):
            ident[a, a] = self._num(1)
        r1 = P.dot(P) - (-ident + eta_xi)
        r2 = P.T.dot(g).dot(P) - (g - eta_xi * self.epsilon)
        G = self.connection
        r3 = G[:, self.xi, :].T + P
        # (nabla_a Phi) e_b = nabla_a (Phi e_b) - Phi (nabla_a e_b); columns of G[a].T are nabla_a e_b
        r4 = 0.0
        gd = np.diag(g)
        for a in range(d):
            Ga = G[a].T
            lhs = Ga.dot(P) - P.dot(Ga)
            rhs = _zeros((d, d), self.exact)
            for b in range(d):
                if a == b:
                    rhs[self.xi, b] = rhs[self.xi, b] + self.epsilon * gd[a]
                if b == self.xi:
                    rhs[a, b] = rhs[a, b] - self.epsilon * gd[self.xi]
            r4 = max(r4, _max_abs(lhs - rhs))
        d_eta = _model_d_eta_check(self.space)
        return {"phi_squared": _max_abs(r1), "phi_isometry": _max_abs(r2), "phi_nabla_xi": _max_abs(r3),
                "nabla_phi": r4, "d_eta": d_eta}

    # -- connection ---------------------------------------------------------
    @cached_property
    def connection(self):
        """``G[a, b]`` = components of nabla_{e_a} e_b.

        nabla_xi xi = 0, nabla_U xi = nabla_xi U = -eps J U,
        nabla_U V = D_U V + omega(U, V) xi with D = 0 in the normal base frame.
        """
        n, d, eps, xi = self.n, self.dim, self.epsilon, self.xi
        G = _zeros((d, d, d), self.exact)
        J = kh.j_matrix(n)
        om = kh.omega_matrix(n)
        for i in range(2 * n):
            for r in range(2 * n):
                if J[r, i]:
                    G[i, xi, r] = self._num(-eps * J[r, i])
                    G[xi, i, r] = self._num(-eps * J[r, i])
            for j in range(2 * n):
                if om[i, j]:
                    G[i, j, xi] = self._num(om[i, j])
        return G

    def nabla(self, X: FrameVector, Y: FrameVector) -> FrameVector:
        """nabla_X Y for invariant fields (constant frame coefficients)."""
        if X.space != self.space or Y.space != self.space:
            raise SasakiError("vector fields must be invariant fields of this model")
        G = self.connection
        out = [0 * G[0, 0, 0]] * self.dim
        for a, x in enumerate(X.comps):
            if not x:
                continue
            for b, y in enumerate(Y.comps):
                if not y:
                    continue
                for r in range(self.dim):
                    c = G[a, b, r]
                    if c:
                        out[r] = out[r] + c * x * y
        return FrameVector(self.space, tuple(out))

    def bracket_constants(self):
        """Structure constants C[a, b] = [e_a, e_b]: 2 omega(a, b) xi, [xi, .] = 0."""
        d = self.dim
        C = _zeros((d, d, d), self.exact)
        om = kh.omega_matrix(self.n)
        for i in range(2 * self.n):
            for j in range(2 * self.n):
                if om[i, j]:
                    C[i, j, self.xi] = self._num(2 * om[i, j])
        return C

    # -- curvature ----------------------------------------------------------
    @cached_property
    def riemann_tensor(self):
        """Full (1,3) tensor from the base curvature and the omega corrections."""
        n, d, eps, xi = self.n, self.dim, self.epsilon, self.xi
        h = 2 * n
        R = _zeros((d, d, d, d), self.exact)
        Rh = self.base.R
        J = kh.j_matrix(n)
        om = kh.omega_matrix(n)
        R[:h, :h, :h, :h] = Rh
        for a in range(h):
            for b in range(h):
                for c in range(h):
                    corr = 2 * eps * om[a, b] * J[:, c] - eps * (om[b, c] * J[:, a] - om[a, c] * J[:, b])
                    for r in np.flatnonzero(corr):
                        R[a, b, c, r] = R[a, b, c, r] + self._num(int(corr[r]))
        for v in range(h):
            R[xi, v, xi, v] = self._num(-1)
            R[v, xi, xi, v] = self._num(1)
            R[xi, v, v, xi] = self._num(eps)
            R[v, xi, v, xi] = self._num(-eps)
        return R

    def riemann(self, X: FrameVector, Y: FrameVector, Z: FrameVector) -> FrameVector:
        R = self.riemann_tensor
        out = np.einsum("abcd,a,b,c->d", R, _arr(X, self.exact), _arr(Y, self.exact), _arr(Z, self.exact))
        return FrameVector(self.space, tuple(out))

    def riemann_lowered(self):
        """R(e_a, e_b, e_c, e_d) = g(R(e_a, e_b) e_c, e_d)."""
        return self.riemann_tensor * np.diag(self.metric)[None, None, None, :]

    def label(self, a: int) -> str:
        return "xi" if a == self.xi else f"e{a + 1}"

    def _vec_json(self, vec) -> dict:
        return {self.label(r): _literal(c) for r, c in enumerate(vec) if c}

    def connection_table(self) -> dict:
        """Frame-indexed nabla_{e_a} e_b, nonzero entries in (a, b) order."""
        G = self.connection
        entries = [{"a": self.label(a), "b": self.label(b), "value": self._vec_json(G[a, b])}
                   for a in range(self.dim) for b in range(self.dim) if any(G[a, b])]
        return {"n": self.n, "epsilon": self.epsilon, "kind": "connection", "entries": entries}

    def curvature_table(self) -> dict:
        """Frame-indexed R(e_a, e_b) e_c for a < b, nonzero entries only."""
        R = self.riemann_tensor
        d = self.dim
        entries = [{"a": self.label(a), "b": self.label(b), "c": self.label(c), "value": self._vec_json(R[a, b, c])}
                   for a in range(d) for b in range(a + 1, d) for c in range(d) if any(R[a, b, c])]
        return {"n": self.n, "epsilon": self.epsilon, "kind": "curvature", "entries": entries}

    def curvature_endomorphisms(self):
        return kh.endomorphisms(self.riemann_tensor)

    def curvature_symmetries(self) -> dict:
        L = self.riemann_lowered()
        return {
            "antisymmetry_12": _max_abs(L + L.transpose(1, 0, 2, 3)),
            "antisymmetry_34": _max_abs(L + L.transpose(0, 1, 3, 2)),
            "pair_symmetry": _max_abs(L - L.transpose(2, 3, 0, 1)),
            "first_bianchi": _max_abs(L + L.transpose(1, 2, 0, 3) + L.transpose(2, 0, 1, 3)),
        }

    def ricci_contraction(self):
        return np.einsum("abca->bc", self.riemann_tensor)

    def ricci(self):
        """Ric(xi, xi) = 2n, Ric(xi, U) = 0, Ric(U, V) = Ric_h(U, V) - 2 eps h(U, V)."""
        d, h = self.dim, 2 * self.n
        Ric = _zeros((d, d), self.exact)
        Ric[:h, :h] = self.base.ricci()
        for i in range(h):
            Ric[i, i] = Ric[i, i] - 2 * self.epsilon
        Ric[self.xi, self.xi] = self._num(2 * self.n)
        return Ric

    def ricci_agreement(self) -> float:
        return _max_abs(self.ricci() - self.ricci_contraction())

    def eta_einstein_check(self) -> EtaEinstein:
        """Fit Ric = lam g + nu eta x eta and compare with (-2 eps, 2(n+1))."""
        Ric = self.ricci()
        h = 2 * self.n
        eps = self.epsilon
        lam = sum(Ric[i, i] for i in range(h)) / h
        nu = Ric[self.xi, self.xi] - lam * eps
        fit = Ric - self.metric * lam
        fit[self.xi, self.xi] = fit[self.xi, self.xi] - nu
        lam0, nu0 = self._num(-2 * eps), self._num(2 * (self.n + 1))
        target = self.metric * lam0
        target[self.xi, self.xi] = target[self.xi, self.xi] + nu0
        diff = Ric - target
        return EtaEinstein(lam, nu, _max_abs(fit), _max_abs(diff), lam0, nu0, diff[:h, :h])

    # -- Lorentzian / Riemannian switch -------------------------------------
    def switch(self) -> SasakiModel:
        """g' = g - 2 eps eta x eta: epsilon flips, Phi flips, base unchanged."""
        return SasakiModel(self.base, -self.epsilon, self.backend)

    def switch_relation_residual(self) -> float:
        """max |nabla'_X Y - nabla_X Y - 2 eta(Y) Phi(X) - 2 eta(X) Phi(Y)| over frame pairs."""
        other = self.switch()
        G, Gb = self.connection, other.connection
        P = self.phi_matrix
        worst = 0.0
        for a in range(self.dim):
            for b in range(self.dim):
                expected = _zeros(self.dim, self.exact)
                if b == self.xi:
                    expected = expected + 2 * P[:, a]
                if a == self.xi:
                    expected = expected + 2 * P[:, b]
                worst = max(worst, _max_abs(Gb[a, b] - G[a, b] - expected))
        return worst

    # -- Koszul oracle --------------------------------------------------------
    def koszul_connection(self):
        """Levi-Civita connection of the metric Lie algebra with brackets C.

        2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
        """
        C = self.bracket_constants()
        gd = np.diag(self.metric)
        d = self.dim
        G = _zeros((d, d, d), self.exact)
        half = self._num(Fraction(1, 2))
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    val = C[a, b, c] * gd[c] - C[b, c, a] * gd[a] + C[c, a, b] * gd[b]
                    if val:
                        G[a, b, c] = val * half / gd[c]
        return G

    def koszul_oracle(self) -> dict:
        if not self.base.is_zero():
            raise SasakiError("the Koszul oracle needs the flat (Heisenberg) base")
        G = self.koszul_connection()
        C = self.bracket_constants()
        gd = np.diag(self.metric)
        torsion = G - G.transpose(1, 0, 2) - C
        # g(nabla_a e_b, e_c) + g(e_b, nabla_a e_c)
        low = G * gd[None, None, :]
        metric = low + low.transpose(0, 2, 1)
        return {
            "connection_diff": _max_abs(G - self.connection),
            "torsion": _max_abs(torsion),
            "metric": _max_abs(metric),
            "curvature_diff": _max_abs(self.koszul_curvature(G, C) - self.riemann_tensor),
        }

    def koszul_curvature(self, G=None, C=None):
        """R(e_a,e_b) = [G_a, G_b] - sum_c C[a,b,c] G_c for invariant fields."""
        G = self.koszul_connection() if G is None else G
        C = self.bracket_constants() if C is None else C
        # G_a as matrices: (G_a)[r, b] = G[a, b, r]
        Gm = np.transpose(G, (0, 2, 1))
        comm = np.einsum("arx,bxc->abrc", Gm, Gm) - np.einsum("brx,axc->abrc", Gm, Gm)
        brk = np.einsum("abx,xrc->abrc", C, Gm)
        E = comm - brk
        # store as R[a, b, c, r]
        return np.transpose(E, (0, 1, 3, 2))

    # -- spinors --------------------------------------------------------------
    @cached_property
    def spinors(self) -> SpinorModule:
        return SpinorModule(self.n, self.epsilon, self.backend)

    @cached_property
    def phi_spin(self):
        return self.spinors.act_so_element(self._as_rows(self.phi_matrix))

    def _as_rows(self, A):
        return [[A[r, c] for c in range(self.dim)] for r in range(self.dim)]

    def _c(self, x):
        return self.backend.complex(x)

    def spinor_derivative_formula(self, X: FrameVector, phi: Spinor) -> Spinor:
        """Basic spinor derivative: 1/2 eps Phi(U) . xi . phi horizontally, -Phi . phi along xi."""
        S = self.spinors
        U = FrameVector(self.space, X.comps[:-1] + (0 * X.comps[-1],))
        xi = S.generator(self.xi)
        out = S.act_vector(self.phi(U)).apply(xi.apply(phi)).scale(self._c(Fraction(self.epsilon, 2)))
        t = X.comps[-1]
        if t:
            out = out - self.phi_spin.apply(phi).scale(self._c(t))
        return out

    @cached_property
    def _connection_spin(self) -> tuple:
        """rho(Gamma_a) with Gamma_a e_b = nabla_{e_a} e_b, per frame direction."""
        G = self.connection
        return tuple(self.spinors.act_so_element(self._as_rows(G[a].T)) for a in range(self.dim))

    def spinor_derivative_connection(self, X: FrameVector, phi: Spinor) -> Spinor:
        """Spin lift of the Levi-Civita connection: rho(e_b -> nabla_X e_b) phi."""
        out = self.spinors.zero()
        for a, x in enumerate(X.comps):
            if x:
                out = out + self._connection_spin[a].apply(phi).scale(self._c(x))
        return out

    def spinor_covariant_derivative(self, X: FrameVector, phi: Spinor, path: str = "formula") -> Spinor:
        if path == "formula":
            return self.spinor_derivative_formula(X, phi)
        if path == "connection":
            return self.spinor_derivative_connection(X, phi)
        raise SasakiError(f"unknown path {path!r}")

    def spin_connection_oracle(self, spinors=None) -> float:
        """Max difference of the two spinor-derivative paths over frame directions."""
        S = self.spinors
        spinors = spinors if spinors is not None else [S.basis_spinor(B) for B in S.basis]
        worst = 0.0
        for a in range(self.dim):
            X = self.frame_vector(a)
            for phi in spinors:
                diff = self.spinor_derivative_formula(X, phi) - self.spinor_derivative_connection(X, phi)
                worst = max(worst, diff.max_abs())
        return worst

    def gks_verify(self, phi: Spinor) -> GKSReport:
        """Residuals of nabla_X phi - 1/2 eps Phi(X) xi phi and nabla_xi phi + Phi phi."""
        if phi.is_zero():
            raise SasakiError("a generalised Killing spinor must be nonzero")
        if not self.base.is_zero():
            raise SasakiError("the spinor derivative is modelled for the flat base only")
        S = self.spinors
        xi = S.generator(self.xi)
        half_eps = self._c(Fraction(self.epsilon, 2))
        horiz = []
        for i in range(2 * self.n):
            X = self.frame_vector(i)
            lhs = self.spinor_derivative_connection(X, phi)
            rhs = S.act_vector(self.phi(X)).apply(xi.apply(phi)).scale(half_eps)
            horiz.append((lhs - rhs).max_abs())
        vert = (self.spinor_derivative_connection(self.frame_vector(self.xi), phi) + self.phi_spin.apply(phi)).max_abs()
        return GKSReport(horiz, vert)

    def curvature_spin(self, a: int, b: int):
        """Spin lift of R(e_a, e_b) (cached)."""
        key = (a, b)
        cache = self.__dict__.setdefault("_curv_spin", {})
        if key not in cache:
            M = self.curvature_endomorphisms()[a, b]
            cache[key] = self.spinors.act_so_element(self._as_rows(M), check=False)
        return cache[key]

    def gamma_trace(self, X: FrameVector, phi: Spinor) -> Spinor:
        """sum_a g^aa e_a . R(X, e_a) . phi (spin lift of the curvature)."""
        S = self.spinors
        out = S.zero()
        for b in range(self.dim):
            Rb = None
            for a, x in enumerate(X.comps):
                if not x:
                    continue
                term = self.curvature_spin(a, b).scale(self._c(x))
                Rb = term if Rb is None else Rb + term
            if Rb is None:
                continue
            op = S.generator(b) @ Rb
            out = out + op.apply(phi).scale(self._c(self.space.metric(b, b)))
        return out

    def gamma_trace_expected(self, X: FrameVector, phi: Spinor) -> Spinor:
        """-1/2 r(X) . phi with r(X) = Ric(X, .)^sharp."""
        Ric = self.ricci()
        gd = np.diag(self.metric)
        comps = [sum((Ric[a, b] * X.comps[a] for a in range(self.dim) if X.comps[a]), 0 * Ric[0, 0]) / gd[b]
                 for b in range(self.dim)]
        r = FrameVector(self.space, tuple(comps))
        return self.spinors.act_vector(r).apply(phi).scale(self._c(Fraction(-1, 2)))

    def gks_obstruction(self, U: FrameVector, phi: Spinor) -> Spinor:
        """gamma_trace(U) - eps U . phi for horizontal U; equals -1/2 r_h(U) . phi."""
        if not U.is_horizontal():
            raise SasakiError("U must be horizontal")
        S = self.spinors
        return self.gamma_trace(U, phi) - S.act_vector(U).apply(phi).scale(self._c(self.epsilon))

    # -- trace forms ----------------------------------------------------------
    def trace_form_direct(self, k: int, path: str = "wedge"):
        """Dense Tr R^{2k} of the total space over ``subsets(2n+1, 4k)``."""
        M = self.curvature_endomorphisms()
        fn = kh.trace_form_wedge if path == "wedge" else kh.trace_form_permutation
        return fn(M, 2 * k)

    def trace_form_closed(self, k: int) -> ModelForm:
        """Tr R^2 and Tr R^4 of the total space from base invariants."""
        if self.n != 5 or self.epsilon != -1:
            raise SasakiError("the closed trace-form formulas are for n = 5, eps = -1")
        sp = self.space
        conv = self._form_scalar
        base = self.base

        def pull(vec, deg):
            return horizontal_to_modelform(sp, vec, deg, conv)

        from .exterior import wedge

        om = ModelForm.omega(sp, conv(1))
        om2 = ModelForm.omega_power(sp, 2, conv(1))
        om3 = ModelForm.omega_power(sp, 3, conv(1))
        om4 = ModelForm.omega_power(sp, 4, conv(1))
        rho1 = pull(base.rho1_from_ricci(), 2)
        tr2 = pull(base.trace_form(1), 4)
        F = Fraction if self.exact else float
        if k == 1:
            return tr2 + wedge(rho1, om).scale(conv(F(-4, 3) if self.exact else -4 / 3)) + om2.scale(conv(-8))
        if k == 2:
            tr4 = pull(base.trace_form(2), 8)
            rho2 = pull(base.rho2(), 6)
            c = (lambda p, q: conv(Fraction(p, q))) if self.exact else (lambda p, q: p / q)
            return (tr4 + wedge(rho2, om).scale(c(-2, 7)) + wedge(tr2, om2).scale(c(-2, 35))
                    + wedge(rho1, om3).scale(c(8, 315)) + om4.scale(c(8, 105)))
        raise SasakiError("k must be 1 or 2")

    def _form_scalar(self, x):
        return QuadScalar.from_rational(Fraction(x)) if self.exact else float(x)

    def trace_form_on_M(self, k: int, path: str = "wedge") -> ModelForm:
        vec = self.trace_form_direct(k, path)
        return dense_to_modelform(self.space, vec, 4 * k, self._form_scalar)


def _literal(c) -> str:
    if isinstance(c, float):
        return repr(c)
    return str(Fraction(c))


def _arr(X: FrameVector, exact: bool):
    if exact:
        return np.array([Fraction(c) if not isinstance(c, QuadScalar) else c for c in X.comps], dtype=object)
    return np.array([float(c) for c in X.comps])


def _model_d_eta_check(space: FrameSpace) -> float:
    from .exterior import model_d

    r = model_d(ModelForm.eta(space)) - ModelForm.omega(space).scale(-2)
    return r.max_abs()


@dataclass
class EtaEinstein:
    lam: object
    nu: object
    fit_residual: float
    residual: float
    expected_lam: object
    expected_nu: object
    horizontal_block: np.ndarray = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.residual == 0 and self.fit_residual == 0


@dataclass
class GKSReport:
    horizontal: list
    vertical: float

    @property
    def max_residual(self) -> float:
        return max(self.horizontal + [self.vertical])

    @property
    def passed(self) -> bool:
        return self.max_residual == 0.0


def flat_model(n: int = 5, epsilon: int = -1, exact: bool = True) -> SasakiModel:
    return SasakiModel(kh.flat(n, exact), epsilon)
