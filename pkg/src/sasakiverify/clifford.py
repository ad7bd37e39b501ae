"""Dirac spinor module S = Lambda(U*) with an explicit Clifford action.

U = W^{10} is spanned by u_1..u_n and acts by ``u_i . phi = -2 iota_i phi``;
the conjugate directions act by ``ubar_i . phi = 1/2 u^i ^ phi``.  The real
frame is ``e_i = u_i + ubar_i`` and ``e_{i+n} = i (u_i - ubar_i)``, so that
``e_a e_b + e_b e_a = -2 g_ab``.  The Reeb direction acts as
``i^{(eps+1)/2} vol_2n`` with ``vol_2n = (-1)^{n(n+1)/2} i^n e_1 ... e_2n``.

Basis spinors ``u^S`` are indexed by subsets S of ``range(n)`` ordered by
cardinality and then lexicographically (0-based internally).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .exterior import FrameSpace, FrameVector, ModelForm
from .scalars import EXACT, CScalar, QuadScalar, format_complex, parse_complex


class CliffordError(ValueError):
    pass


def _bits_below(S: tuple, i: int) -> int:
    return sum(1 for s in S if s < i)


class CliffordOp:
    """Linear operator on S stored as sparse columns ``{row: coeff}``."""

    __slots__ = ("dim", "cols")

    def __init__(self, dim: int, cols):
        self.dim = dim
        self.cols = tuple({r: v for r, v in c.items() if v} for c in cols)

    @classmethod
    def zero(cls, dim: int) -> CliffordOp:
        return cls(dim, [{} for _ in range(dim)])

    @classmethod
    def identity(cls, dim: int, one=1) -> CliffordOp:
        return cls(dim, [{j: one} for j in range(dim)])

    @classmethod
    def diagonal(cls, values) -> CliffordOp:
        values = list(values)
        return cls(len(values), [{j: v} for j, v in enumerate(values)])

    def __matmul__(self, other: CliffordOp) -> CliffordOp:
        cols = []
        A = self.cols
        for col in other.cols:
            out: dict = {}
            for k, b in col.items():
                for r, a in A[k].items():
                    p = a * b
                    cur = out.get(r)
                    out[r] = p if cur is None else cur + p
            cols.append(out)
        return CliffordOp(self.dim, cols)

    def __add__(self, other: CliffordOp) -> CliffordOp:
        cols = []
        for c1, c2 in zip(self.cols, other.cols):
            out = dict(c1)
            for r, v in c2.items():
                cur = out.get(r)
                out[r] = v if cur is None else cur + v
            cols.append(out)
        return CliffordOp(self.dim, cols)

    def __neg__(self) -> CliffordOp:
        return self.scale(-1)

    def __sub__(self, other: CliffordOp) -> CliffordOp:
        return self + (-other)

    def scale(self, c) -> CliffordOp:
        return CliffordOp(self.dim, [{r: c * v for r, v in col.items()} for col in self.cols])

    def __rmul__(self, c) -> CliffordOp:
        return self.scale(c)

    def __call__(self, phi: Spinor) -> Spinor:
        return self.apply(phi)

    def apply(self, phi: Spinor) -> Spinor:
        out: dict = {}
        for k, b in enumerate(phi.coeffs):
            if not b:
                continue
            for r, a in self.cols[k].items():
                p = a * b
                cur = out.get(r)
                out[r] = p if cur is None else cur + p
        zero = phi.coeffs[0] * 0
        return Spinor(tuple(out.get(r, zero) for r in range(self.dim)))

    def commutator(self, other: CliffordOp) -> CliffordOp:
        return self @ other - other @ self

    def entry(self, r: int, c: int):
        return self.cols[c].get(r, 0)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def max_abs(self) -> float:
        return max((abs(complex(v)) for col in self.cols for v in col.values()), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, CliffordOp):
            return NotImplemented
        return self.dim == other.dim and (self - other).is_zero()

    __hash__ = None

    def to_dense(self):
        import numpy as np

        out = np.zeros((self.dim, self.dim), dtype=complex)
        for c, col in enumerate(self.cols):
            for r, v in col.items():
                out[r, c] = complex(v)
        return out


@dataclass(frozen=True)
class Spinor:
    """Coefficients over the ordered subset basis of Lambda(U*)."""

    coeffs: tuple

    def __add__(self, other: Spinor) -> Spinor:
        return Spinor(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: Spinor) -> Spinor:
        return Spinor(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> Spinor:
        return Spinor(tuple(-a for a in self.coeffs))

    def scale(self, c) -> Spinor:
        return Spinor(tuple(c * a for a in self.coeffs))

    def __rmul__(self, c) -> Spinor:
        return self.scale(c)

    def __len__(self):
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def max_abs(self) -> float:
        return max((abs(complex(a)) for a in self.coeffs), default=0.0)

    def support(self) -> list[int]:
        return [k for k, a in enumerate(self.coeffs) if a]

    def to_json(self) -> list[str]:
        return [format_complex(a) if isinstance(a, CScalar) else _format_float(a) for a in self.coeffs]


def _format_float(z) -> str:
    z = complex(z)
    return f"{z.real!r} + i*({z.imag!r})"


class SpinorModule:
    """The 2^n-dimensional Dirac module for the frame (e_1..e_2n, xi)."""

    def __init__(self, n: int = 5, epsilon: int = -1, backend=EXACT):
        self.space = FrameSpace(n, epsilon)
        self.n = n
        self.epsilon = epsilon
        self.backend = backend
        self.basis = tuple(S for k in range(n + 1) for S in itertools.combinations(range(n), k))
        self.position = {S: k for k, S in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.one = backend.complex(1)
        self.zero_scalar = backend.complex(0)
        self.i = backend.complex(0, 1)
        self._products: dict = {}

    # -- spinors ----------------------------------------------------------
    def zero(self) -> Spinor:
        return Spinor((self.zero_scalar,) * self.dim)

    def basis_spinor(self, S, coeff=None) -> Spinor:
        S = tuple(sorted(S))
        c = self.one if coeff is None else self.backend.complex(coeff)
        vals = [self.zero_scalar] * self.dim
        vals[self.position[S]] = c
        return Spinor(tuple(vals))

    def spinor(self, coeffs) -> Spinor:
        coeffs = [self.backend.complex(c) for c in coeffs]
        if len(coeffs) != self.dim:
            raise CliffordError(f"expected {self.dim} coefficients, got {len(coeffs)}")
        return Spinor(tuple(coeffs))

    def degree(self, S) -> int:
        return len(S)

    def grade_part(self, phi: Spinor, p: int) -> Spinor:
        return Spinor(tuple(c if len(S) == p else self.zero_scalar for S, c in zip(self.basis, phi.coeffs)))

    def homogeneous_degree(self, phi: Spinor):
        """The common |S| of the support, or None when mixed or zero."""
        degs = {len(self.basis[k]) for k in phi.support()}
        return degs.pop() if len(degs) == 1 else None

    @cached_property
    def phi_plus(self) -> Spinor:
        return self.basis_spinor(())

    @cached_property
    def phi_minus(self) -> Spinor:
        """Top-degree spinor normalised to unit length: 2^{-n/2} u^{1..n}."""
        return self.basis_spinor(tuple(range(self.n)), self._half_power(-self.n))

    def _half_power(self, k: int):
        """2^{k/2} in the backend."""
        q, r = divmod(k, 2)
        val = self.backend.real(QuadScalar(2) ** q if q >= 0 else QuadScalar(1) / QuadScalar(2) ** (-q))
        if r:
            val = val * self.backend.real(QuadScalar(0, 1))
        return self.backend.complex(val)

    def from_json(self, data) -> Spinor:
        if self.backend.exact:
            return Spinor(tuple(parse_complex(str(s)) for s in data))
        return self.spinor([complex(parse_complex(str(s))) for s in data])

    def hermitian(self, a: Spinor, b: Spinor):
        """Hermitian product with g(u^S, ubar^S) = 2^|S| (antilinear in a)."""
        total = self.zero_scalar
        conj = self.backend.conj
        for S, x, y in zip(self.basis, a.coeffs, b.coeffs):
            if x and y:
                total = total + (2 ** len(S)) * (conj(x) * y)
        return total

    # -- operators --------------------------------------------------------
    def identity(self) -> CliffordOp:
        return CliffordOp.identity(self.dim, self.one)

    def zero_op(self) -> CliffordOp:
        return CliffordOp.zero(self.dim)

    def u(self, i: int) -> CliffordOp:
        """u_i acting by -2 times contraction with u_i."""
        cols = []
        for S in self.basis:
            if i in S:
                sign = -1 if _bits_below(S, i) % 2 else 1
                T = tuple(s for s in S if s != i)
                cols.append({self.position[T]: self.backend.complex(-2 * sign)})
            else:
                cols.append({})
        return CliffordOp(self.dim, cols)

    def ubar(self, i: int) -> CliffordOp:
        """ubar_i acting by 1/2 u^i ^ (the metric dual of ubar_i is u^i / 2)."""
        half = self.backend.complex(QuadScalar(1) / 2)
        cols = []
        for S in self.basis:
            if i in S:
                cols.append({})
            else:
                sign = -1 if _bits_below(S, i) % 2 else 1
                T = tuple(sorted(S + (i,)))
                cols.append({self.position[T]: half * sign})
        return CliffordOp(self.dim, cols)

    @cached_property
    def _generators(self) -> tuple:
        n = self.n
        horiz = [self.u(i) + self.ubar(i) for i in range(n)]
        horiz += [(self.u(i) - self.ubar(i)).scale(self.i) for i in range(n)]
        prod = self.identity()
        for g in horiz:
            prod = prod @ g
        phase = self.one
        for _ in range(n):
            phase = phase * self.i
        if (n * (n + 1) // 2) % 2:
            phase = -phase
        vol = prod.scale(phase)
        xi = vol if self.epsilon == -1 else vol.scale(self.i)
        return tuple(horiz) + (xi,), vol

    @property
    def vol(self) -> CliffordOp:
        """vol_2n, the Weyl grading operator (+1 on even, -1 on odd degree)."""
        return self._generators[1]

    def generator(self, a: int) -> CliffordOp:
        """Clifford action of the frame vector with internal index a."""
        if not 0 <= a <= 2 * self.n:
            raise CliffordError(f"unknown frame index {a}")
        return self._generators[0][a]

    def act_generator(self, label) -> CliffordOp:
        """Generator for a 1-based horizontal label or ``"xi"``."""
        try:
            return self.generator(self.space.index(label))
        except ValueError as exc:
            raise CliffordError(str(exc)) from None

    def product(self, idx: tuple) -> CliffordOp:
        """e_{idx[0]} ... e_{idx[-1]} (cached)."""
        op = self._products.get(idx)
        if op is None:
            if not idx:
                op = self.identity()
            else:
                op = self.product(idx[:-1]) @ self.generator(idx[-1])
            self._products[idx] = op
        return op

    def act_vector(self, X: FrameVector) -> CliffordOp:
        out = self.zero_op()
        for a, c in enumerate(X.comps):
            if c:
                out = out + self.generator(a).scale(self.backend.complex(c))
        return out

    def act_covector(self, a: ModelForm) -> CliffordOp:
        return self.act_form(a)

    def act_form(self, a: ModelForm) -> CliffordOp:
        """Clifford action of a form: e^I maps to e_I, and eta to eps xi."""
        eps = self.epsilon
        xi = 2 * self.n
        out = self.zero_op()
        for idx, c in a.terms():
            coeff = self.backend.complex(c)
            if idx and idx[-1] == xi:
                coeff = coeff * eps
            out = out + self.product(idx).scale(coeff)
        return out

    def act_so_element(self, A, check: bool = True) -> CliffordOp:
        """Spin lift 1/4 sum_{a,b} g^aa g^bb g(A e_a, e_b) e_a e_b.

        ``A[b][a]`` is the b-th component of ``A e_a``.  The lift is the
        one with ``[rho(A), X.] = (A X).``.
        """
        d = 2 * self.n + 1
        g = [self.space.metric(a, a) for a in range(d)]
        if check:
            for a in range(d):
                for b in range(d):
                    if g[b] * A[b][a] + g[a] * A[a][b]:
                        raise CliffordError("endomorphism is not skew with respect to g")
        quarter = self.backend.real(QuadScalar(1) / 4)
        out = self.zero_op()
        for a in range(d):
            for b in range(d):
                if a == b:
                    continue
                c = A[b][a]
                if not c:
                    continue
                # g^aa g^bb g(Ae_a, e_b) = g_aa A[b][a]
                coeff = self.backend.complex(quarter * (g[a] * c))
                out = out + self.product((a, b)).scale(coeff)
        return out

    def phi_commutator_identity(self, X: FrameVector, phi: Spinor) -> tuple[Spinor, Spinor]:
        """Both sides of ``X.omega.phi - omega.X.phi = -2 iota_X omega . phi``.

        ``iota_X omega`` is the 1-form dual to ``-JX``, which equals
        ``Phi(X)`` in the Lorentzian case; the right side is returned as
        the action of that 1-form.
        """
        if not X.is_horizontal():
            raise CliffordError("X must be horizontal")
        om = self.act_form(ModelForm.omega(self.space))
        Xc = self.act_vector(X)
        lhs = (Xc @ om - om @ Xc).apply(phi)
        from .exterior import interior

        rhs = self.act_form(interior(X, ModelForm.omega(self.space))).scale(self.backend.complex(-2)).apply(phi)
        return lhs, rhs

    # -- star and pseudo-Majorana conjugation ------------------------------
    def _complement(self, S: tuple) -> tuple[tuple, int]:
        T = tuple(k for k in range(self.n) if k not in S)
        from .alternating import perm_sign

        return T, perm_sign(S + T)

    def star(self, phi: Spinor) -> Spinor:
        """Antilinear star with ``phi ^ *phi' = g(phi, conj phi') phi_minus``."""
        self._require_eleven()
        conj = self.backend.conj
        vals = [self.zero_scalar] * self.dim
        for S, c in zip(self.basis, phi.coeffs):
            if not c:
                continue
            T, sigma = self._complement(S)
            vals[self.position[T]] = conj(c) * self._half_power(2 * len(S) - self.n) * sigma
        return Spinor(tuple(vals))

    def majorana_j(self, phi: Spinor) -> Spinor:
        """``j = (-1)^{p(p-1)/2} 2^p / sqrt(32) * star`` on degree p."""
        self._require_eleven()
        st = self.star(phi)
        vals = list(st.coeffs)
        for k, T in enumerate(self.basis):
            if vals[k]:
                p = self.n - len(T)
                sign = -1 if (p * (p - 1) // 2) % 2 else 1
                vals[k] = vals[k] * self._half_power(2 * p - self.n) * sign
        return Spinor(tuple(vals))

    def _require_eleven(self):
        if self.n != 5:
            raise CliffordError("star and j are defined for n = 5 only")

    def pseudo_majorana_combination(self, phi_p: Spinor, phi_m: Spinor, c_plus=None) -> Spinor:
        """A j-real combination c+ phi_+ + c- phi_- with c- = kappa conj(c+).

        ``kappa`` is read off from ``j(phi_+) = kappa phi_-``.
        """
        self._require_eleven()
        if phi_p.is_zero() or phi_m.is_zero():
            raise CliffordError("pseudo-Majorana combination needs nonzero spinors")
        jp = self.majorana_j(phi_p)
        kappa = _ratio(jp, phi_m)
        if kappa is None:
            raise CliffordError("j(phi_+) is not proportional to phi_-")
        cp = self.one if c_plus is None else self.backend.complex(c_plus)
        cm = kappa * self.backend.conj(cp)
        return phi_p.scale(cp) + phi_m.scale(cm)

    # -- convenience ------------------------------------------------------
    def eigenvalue(self, op: CliffordOp, phi: Spinor):
        """c with op(phi) = c phi, or None."""
        return _ratio(op.apply(phi), phi)


def _ratio(a: Spinor, b: Spinor):
    """c with a == c b, or None."""
    k = next((k for k, x in enumerate(b.coeffs) if x), None)
    if k is None:
        return None
    c = a.coeffs[k] / b.coeffs[k]
    diff = a - b.scale(c)
    if isinstance(c, CScalar):
        return c if diff.is_zero() else None
    scale = max(a.max_abs(), b.max_abs(), 1.0)
    return c if diff.max_abs() <= 1e-9 * scale else None


ratio = _ratio
