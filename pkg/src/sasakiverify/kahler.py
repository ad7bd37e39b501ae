"""Algebraic Kaehler curvature tensors on a 2n-dimensional base.

Components live in the orthonormal frame (e_1..e_2n) with ``e_{i+n} = J e_i``;
``R[a, b, c, d] = h(R(e_a, e_b) e_c, e_d)`` (the metric is the identity, so
this is also the d-th component of ``R(e_a, e_b) e_c``).  Conventions:

* ``Ric_bc = sum_a R[a, b, c, a]``
* ``rho1(U1, U2) = Ric(J U1, U2) = 1/2 Tr(J o R(U1, U2))``
* ``Tr R^{2k} = 1/(4k)! sum_sigma sgn(sigma) Tr(R(x_s1, x_s2) ... )``
* ``rho2 = 1/6! sum_sigma sgn(sigma) Tr(J o R R R)``

Exact tensors are numpy object arrays of Fractions; float tensors are
float64 arrays.  Forms are dense vectors over ``alternating.subsets``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import alternating as alt
from .scalars import QuadScalar, parse_quad


def j_matrix(n: int) -> np.ndarray:
    """Matrix of J with columns J e_a: J e_i = e_{i+n}, J e_{i+n} = -e_i."""
    J = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for i in range(n):
        J[i + n, i] = 1
        J[i, i + n] = -1
    return J


def omega_matrix(n: int) -> np.ndarray:
    """omega(e_a, e_b) = h(J e_a, e_b); omega(e_i, e_{i+n}) = 1."""
    return j_matrix(n).T.copy()


def omega_form(n: int, k: int = 1, exact: bool = True):
    """Dense vector of omega^k over ``subsets(2n, 2k)``."""
    d = 2 * n
    vec = np.zeros(math.comb(d, 2 * k), dtype=object if exact else float)
    idx = alt.subset_index(d, 2 * k)
    for S in itertools.combinations(range(n), k):
        flat = tuple(x for i in S for x in (i, i + n))
        vec[idx[tuple(sorted(flat))]] = alt.perm_sign(flat) * math.factorial(k)
    if exact:
        vec = np.array([Fraction(int(x)) if x else Fraction(0) for x in vec], dtype=object)
    return vec


def _j_perm(n: int):
    """J e_a = sign[a] e_{perm[a]}."""
    perm = np.array([i + n for i in range(n)] + list(range(n)))
    sign = np.array([1] * n + [-1] * n)
    return perm, sign


def apply_j(R, n: int, first: bool):
    """R(JX, JY, Z, W) when ``first`` else R(X, Y, JZ, JW)."""
    perm, sign = _j_perm(n)
    ss = np.outer(sign, sign)
    if first:
        return R[perm][:, perm] * ss[:, :, None, None]
    return R[:, :, perm][:, :, :, perm] * ss[None, None, :, :]


def _to_exact(arr) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    out.flat[:] = [_rational(x) if isinstance(x, QuadScalar) else _fraction(x) for x in arr.flat]
    return out


def _fraction(x) -> Fraction:
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    f = Fraction(x)
    return Fraction(int(f.numerator), int(f.denominator))


def _rational(q: QuadScalar) -> Fraction:
    if not q.is_rational():
        raise ValueError("exact curvature components must be rational")
    return q.a


def max_abs(arr) -> float:
    if arr.size == 0:
        return 0.0
    return float(max(abs(x) for x in arr.flat)) if arr.dtype == object else float(np.abs(arr).max())


# -- exact-aware kernels ---------------------------------------------------


def _scaled(arr):
    """(integer array, denominator) for exact input, (arr, 1) for float."""
    if arr.dtype == object:
        return alt.integerize(arr)
    return arr, 1


def _unscale(arr, den):
    if arr.dtype == object:
        out = np.empty(arr.shape, dtype=object)
        out.flat[:] = [Fraction(int(x), den) for x in arr.flat]
        return out
    return arr / den


def trace_form_permutation(M, m: int, pre=None):
    """``1/(2m)! sum_sigma sgn Tr(pre M ... M)`` from endomorphisms ``M[a, b]``."""
    Mi, den = _scaled(M)
    total = alt.permutation_trace_sum(Mi, m, pre=pre)
    return _unscale(total, den**m * math.factorial(2 * m))


def trace_form_wedge(M, m: int, pre=None):
    """Same quantity via ``2^m/(2m)! Tr(pre Omega^m)`` with the curvature 2-form matrix."""
    Mi, den = _scaled(M)
    Om = alt.two_form_matrix(Mi)
    P, p = Om, 2
    for _ in range(m - 1):
        P, p = alt.form_matmul(P, p, Om, 2), p + 2
    if pre is not None:
        P = alt.left_multiply(pre, P)
    tr = alt.form_trace(P)
    if tr.dtype == object:
        tr = tr * 2**m
        return _unscale(tr, den**m * math.factorial(2 * m))
    return tr * (2**m / (den**m * math.factorial(2 * m)))


def endomorphisms(R) -> np.ndarray:
    """``M[a, b][d, c] = R[a, b, c, d]``, the matrix of R(e_a, e_b)."""
    return np.ascontiguousarray(np.transpose(R, (0, 1, 3, 2)))


# -- the tensor --------------------------------------------------------------


@dataclass
class SymmetryCheck:
    name: str
    residual: float
    passed: bool


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def violations(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {c.name: {"residual": c.residual, "passed": c.passed} for c in self.checks}


@dataclass
class BaseInvariants:
    ricci: np.ndarray
    rho1: np.ndarray
    rho1_trace: np.ndarray
    rho1_agree: bool
    tr2: np.ndarray | None = None
    tr4: np.ndarray | None = None
    rho2: np.ndarray | None = None


class KahlerCurvature:
    """Algebraic curvature tensor with Kaehler symmetries on R^2n."""

    def __init__(self, n: int, components, tolerance: float = 1e-12):
        arr = np.asarray(components)
        d = 2 * n
        if arr.shape != (d, d, d, d):
            raise ValueError(f"expected shape {(d,) * 4}, got {arr.shape}")
        if arr.dtype == object or np.issubdtype(arr.dtype, np.integer):
            arr = _to_exact(arr)
        else:
            arr = arr.astype(float)
        self.n = n
        self.R = arr
        self.tolerance = tolerance
        self._cache: dict = {}

    @property
    def exact(self) -> bool:
        return self.R.dtype == object

    @property
    def dim(self) -> int:
        return 2 * self.n

    def to_float(self) -> KahlerCurvature:
        return KahlerCurvature(self.n, self.R.astype(float), self.tolerance)

    def __eq__(self, other):
        if not isinstance(other, KahlerCurvature):
            return NotImplemented
        return self.n == other.n and bool(np.all(self.R == other.R))

    def is_zero(self) -> bool:
        return max_abs(self.R) == 0

    def _ok(self, residual: float) -> bool:
        return residual == 0 if self.exact else residual <= self.tolerance * max(1.0, max_abs(self.R))

    # -- symmetries ---------------------------------------------------------
    def validate(self) -> ValidationReport:
        R = self.R
        RJJ1 = apply_j(R, self.n, True)
        RJJ2 = apply_j(R, self.n, False)
        resid = {
            "antisymmetry_12": R + R.transpose(1, 0, 2, 3),
            "antisymmetry_34": R + R.transpose(0, 1, 3, 2),
            "pair_symmetry": R - R.transpose(2, 3, 0, 1),
            "first_bianchi": R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3),
            "kahler_12": RJJ1 - R,
            "kahler_34": RJJ2 - R,
        }
        report = ValidationReport()
        for name, arr in resid.items():
            r = max_abs(arr)
            report.checks.append(SymmetryCheck(name, r, self._ok(r)))
        return report

    # -- invariants ---------------------------------------------------------
    def ricci(self):
        return np.einsum("abca->bc", self.R)

    def scalar_curvature(self):
        return np.trace(self.ricci())

    def _J(self):
        J = j_matrix(self.n)
        return J.astype(object) if self.exact else J.astype(float)

    def rho1_from_ricci(self):
        """Dense 2-form rho1(e_a, e_b) = Ric(J e_a, e_b)."""
        mat = np.einsum("pa,pb->ab", self._J(), self.ricci())
        return _matrix_to_two_form(mat)

    def rho1_from_trace(self):
        """Dense 2-form 1/2 Tr(J o R(e_a, e_b))."""
        M = endomorphisms(self.R)
        half = Fraction(1, 2) if self.exact else 0.5
        mat = np.einsum("cd,abdc->ab", self._J(), M) * half
        return _matrix_to_two_form(mat)

    def ricci_and_rho1(self) -> BaseInvariants:
        a = self.rho1_from_ricci()
        b = self.rho1_from_trace()
        return BaseInvariants(self.ricci(), a, b, self._ok(max_abs(a - b)))

    def trace_form(self, k: int, path: str = "wedge"):
        """Tr R^{2k} as a dense 4k-form; path is ``"wedge"`` or ``"permutation"``."""
        if k not in (1, 2):
            raise ValueError("trace_form supports k = 1, 2")
        key = ("tr", k, path)
        if key not in self._cache:
            M = endomorphisms(self.R)
            fn = trace_form_wedge if path == "wedge" else trace_form_permutation
            self._cache[key] = fn(M, 2 * k)
        return self._cache[key]

    def rho2(self, path: str = "wedge"):
        key = ("rho2", path)
        if key not in self._cache:
            M = endomorphisms(self.R)
            fn = trace_form_wedge if path == "wedge" else trace_form_permutation
            self._cache[key] = fn(M, 3, pre=self._J())
        return self._cache[key]

    def invariants(self, path: str = "wedge") -> BaseInvariants:
        inv = self.ricci_and_rho1()
        inv.tr2 = self.trace_form(1, path)
        inv.tr4 = self.trace_form(2, path)
        inv.rho2 = self.rho2(path)
        return inv

    def path_agreement(self) -> dict:
        """Max difference between the permutation and wedge evaluations."""
        return {
            "tr2": max_abs(self.trace_form(1, "wedge") - self.trace_form(1, "permutation")),
            "tr4": max_abs(self.trace_form(2, "wedge") - self.trace_form(2, "permutation")),
            "rho2": max_abs(self.rho2("wedge") - self.rho2("permutation")),
        }

    def admissible(self) -> tuple[bool, dict]:
        if self.n != 5:
            raise ValueError("admissibility is defined for n = 5")
        res = {
            "rho1": max_abs(self.rho1_from_ricci()),
            "tr2": max_abs(self.trace_form(1)),
            "rho2": max_abs(self.rho2()),
            "tr4": max_abs(self.trace_form(2)),
        }
        scale = max(1.0, max_abs(self.R)) ** 4
        if self.exact:
            ok = all(v == 0 for v in res.values())
        else:
            ok = all(v <= self.tolerance * scale for v in res.values())
        return ok, res

    # -- serialisation ------------------------------------------------------
    def to_json(self) -> dict:
        comps = []
        d = self.dim
        for a, b, c, e in itertools.product(range(d), repeat=4):
            if a < b and c < e and (a, b) <= (c, e):
                v = self.R[a, b, c, e]
                if v:
                    comps.append({"idx": [a + 1, b + 1, c + 1, e + 1], "value": str(v)})
        return {"n": self.n, "components": comps}

    @classmethod
    def from_json(cls, data, exact: bool = True) -> KahlerCurvature:
        """Load a generating set of components and close it under the symmetries.

        Each listed component fixes the orbit under index antisymmetry and
        pair symmetry; the J-symmetries are enforced by averaging over
        {Id, J x J} in both pairs.  The result must still pass
        :meth:`validate` (Bianchi is not imposed).
        """
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        d = 2 * n
        R = np.zeros((d,) * 4, dtype=object)
        R.flat[:] = [Fraction(0)] * R.size
        seen = np.zeros((d,) * 4, dtype=bool)
        for entry in data.get("components", []):
            a, b, c, e = (int(x) - 1 for x in entry["idx"])
            v = _rational(parse_quad(str(entry["value"])))
            for (p, q, r, s), sign in _orbit(a, b, c, e):
                if seen[p, q, r, s] and R[p, q, r, s] != sign * v:
                    raise ValueError(f"inconsistent curvature components at {entry['idx']}")
                R[p, q, r, s] = sign * v
                seen[p, q, r, s] = True
        R = (R + apply_j(R, n, True)) * Fraction(1, 2)
        R = (R + apply_j(R, n, False)) * Fraction(1, 2)
        out = cls(n, R)
        if not exact:
            out = out.to_float()
        return out


def _orbit(a, b, c, e):
    base = [((a, b, c, e), 1), ((b, a, c, e), -1), ((a, b, e, c), -1), ((b, a, e, c), 1)]
    out = base + [((r, s, p, q), sg) for (p, q, r, s), sg in base]
    return out


def _matrix_to_two_form(mat):
    d = mat.shape[0]
    pairs = alt.subsets(d, 2)
    return np.array([mat[a, b] for a, b in pairs], dtype=mat.dtype)


# -- constructors -------------------------------------------------------------


def flat(n: int = 5, exact: bool = True) -> KahlerCurvature:
    d = 2 * n
    if exact:
        return KahlerCurvature(n, np.zeros((d,) * 4, dtype=np.int64))
    return KahlerCurvature(n, np.zeros((d,) * 4))


def constant_holomorphic(n: int, c, exact: bool = True) -> KahlerCurvature:
    """Constant holomorphic sectional curvature tensor with Ric = c h.

    ``R(X,Y)Z = k/4 (h(Y,Z)X - h(X,Z)Y + h(JY,Z)JX - h(JX,Z)JY + 2 h(X,JY)JZ)``
    with ``k = 2c/(n+1)``.
    """
    d = 2 * n
    J = j_matrix(n)
    c = Fraction(c) if exact else float(c)
    k = c * 2 / (n + 1)
    quarter = k / 4
    R = np.zeros((d,) * 4, dtype=object if exact else float)
    if exact:
        R.flat[:] = [Fraction(0)] * R.size
    eye = np.eye(d, dtype=np.int64)
    # h(JY, Z) with Y = e_b, Z = e_c is J[c, b]
    for a, b, cc, e in itertools.product(range(d), repeat=4):
        val = (
            eye[b, cc] * eye[a, e]
            - eye[a, cc] * eye[b, e]
            + J[cc, b] * J[e, a]
            - J[cc, a] * J[e, b]
            + 2 * J[a, b] * J[e, cc]
        )
        if val:
            R[a, b, cc, e] = quarter * int(val)
    return KahlerCurvature(n, R)


def random_kahler_curvature(seed: int = 0, n: int = 5, terms: int = 3, bound: int = 3,
                            exact: bool = True) -> KahlerCurvature:
    """Deterministic random integer tensor with every Kaehler symmetry.

    Built in the complex frame: ``K_{a b c d} = sum_m s_m A^m_{ac} conj(A^m_{bd})``
    with complex-symmetric Gaussian-integer ``A^m`` and signs ``s_m``; ``K`` is
    the (u, ubar, u, ubar) component of a Kaehler curvature tensor, and the
    real frame components follow from ``e_i = u_i + ubar_i``,
    ``e_{i+n} = i (u_i - ubar_i)``.  Symmetric A makes first Bianchi hold.
    """
    rng = np.random.default_rng(seed)
    K = np.zeros((n,) * 4, dtype=complex)
    for _ in range(terms):
        A = rng.integers(-bound, bound + 1, (n, n)) + 1j * rng.integers(-bound, bound + 1, (n, n))
        A = A + A.T
        s = rng.choice([-1, 1])
        K += s * np.einsum("ac,bd->abcd", A, A.conj())
    d = 2 * n
    # coefficient of u_i and ubar_i in each real frame vector
    cu = np.array([1] * n + [1j] * n)
    cb = np.array([1] * n + [-1j] * n)
    idx = np.array(list(range(n)) * 2)
    A_, B_, C_, D_ = np.meshgrid(range(d), range(d), range(d), range(d), indexing="ij")
    ia, ib, ic, idd = idx[A_], idx[B_], idx[C_], idx[D_]
    tot = (
        cu[A_] * cb[B_] * cu[C_] * cb[D_] * K[ia, ib, ic, idd]
        - cb[A_] * cu[B_] * cu[C_] * cb[D_] * K[ib, ia, ic, idd]
        - cu[A_] * cb[B_] * cb[C_] * cu[D_] * K[ia, ib, idd, ic]
        + cb[A_] * cu[B_] * cb[C_] * cu[D_] * K[ib, ia, idd, ic]
    )
    if np.abs(tot.imag).max() > 1e-6:
        raise RuntimeError("generator produced a non-real tensor")
    R = np.rint(tot.real).astype(np.int64)
    out = KahlerCurvature(n, R)
    return out if exact else out.to_float()


def perturbed(R: KahlerCurvature, seed: int = 0, size=1) -> KahlerCurvature:
    """Add a totally antisymmetric piece: keeps the index symmetries, breaks Bianchi."""
    rng = np.random.default_rng(seed)
    d = R.dim
    S = tuple(sorted(rng.choice(d, 4, replace=False)))
    T = np.zeros((d,) * 4, dtype=object if R.exact else float)
    if R.exact:
        T.flat[:] = [Fraction(0)] * T.size
    for perm in itertools.permutations(range(4)):
        p = tuple(S[i] for i in perm)
        T[p] = alt.perm_sign(perm) * (Fraction(size) if R.exact else float(size))
    return KahlerCurvature(R.n, R.R + T, R.tolerance)
