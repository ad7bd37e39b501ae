"""Exterior algebra of the adapted-frame model of a Sasakian manifold.

Frame indices are 0-based internally: ``0 .. 2n-1`` are the horizontal
lifts (with ``e_{i+n} = J e_i``) and ``2n`` is the Reeb field xi.  The
dual coframe is ``(e^0, ..., e^{2n-1}, eta)`` with ``eta(xi) = 1`` and
``g(xi, xi) = epsilon``.  JSON literals use the 1-based labels 1..2n.

A :class:`ModelForm` of degree k is stored as the pair
``pi*alpha0 + eta ^ pi*alpha1`` with alpha0 a horizontal k-form and
alpha1 a horizontal (k-1)-form, each a sparse dict from increasing index
tuples to coefficients.  Coefficients may be any ring elements supporting
``+``, ``-`` and ``*`` (QuadScalar, CScalar, Fraction, float, complex).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .alternating import perm_sign
from .scalars import parse_complex, parse_quad

XI = "xi"


@dataclass(frozen=True)
class FrameSpace:
    """Adapted orthonormal frame (e_1..e_2n, xi) with metric diag(1,..,1,epsilon)."""

    n: int = 5
    epsilon: int = -1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    @property
    def xi(self) -> int:
        return 2 * self.n

    def index(self, label) -> int:
        """Internal index of a 1-based horizontal label or ``"xi"``."""
        if label == XI:
            return self.xi
        if isinstance(label, int) and 1 <= label <= 2 * self.n:
            return label - 1
        raise ValueError(f"unknown frame label {label!r}")

    def metric(self, a: int, b: int) -> int:
        if a != b:
            return 0
        return self.epsilon if a == self.xi else 1

    def J(self, i: int) -> tuple[int, int]:
        """Je_i as (sign, index) for a horizontal index i."""
        n = self.n
        return (1, i + n) if i < n else (-1, i - n)

    def omega(self, i: int, j: int) -> int:
        """Kaehler form omega = sum_i e^i ^ e^{i+n} on horizontal indices."""
        n = self.n
        if i < n and j == i + n:
            return 1
        if j < n and i == j + n:
            return -1
        return 0

    def basis_vector(self, label, one=1) -> FrameVector:
        comps = [0] * self.dim
        comps[self.index(label)] = one
        return FrameVector(self, tuple(comps))

    def frame(self, one=1) -> list[FrameVector]:
        return [FrameVector(self, tuple(one if k == a else 0 for k in range(self.dim)))
                for a in range(self.dim)]


@dataclass(frozen=True)
class FrameVector:
    """A vector with constant components over (e_1..e_2n, xi)."""

    space: FrameSpace
    comps: tuple

    def __post_init__(self):
        if len(self.comps) != self.space.dim:
            raise ValueError("component count does not match frame dimension")

    @property
    def horizontal(self) -> tuple:
        return self.comps[:-1]

    @property
    def vertical(self):
        return self.comps[-1]

    def is_horizontal(self) -> bool:
        return not self.comps[-1]

    def __add__(self, other: FrameVector) -> FrameVector:
        return FrameVector(self.space, tuple(x + y for x, y in zip(self.comps, other.comps)))

    def __sub__(self, other: FrameVector) -> FrameVector:
        return FrameVector(self.space, tuple(x - y for x, y in zip(self.comps, other.comps)))

    def __neg__(self) -> FrameVector:
        return FrameVector(self.space, tuple(-x for x in self.comps))

    def scale(self, c) -> FrameVector:
        return FrameVector(self.space, tuple(c * x for x in self.comps))

    def __rmul__(self, c) -> FrameVector:
        return self.scale(c)

    def is_zero(self) -> bool:
        return not any(self.comps)

    def dot(self, other: FrameVector):
        """g(self, other)."""
        total = 0
        for a, (x, y) in enumerate(zip(self.comps, other.comps)):
            if x and y:
                total = total + self.space.metric(a, a) * x * y
        return total

    def eta(self):
        """eta(X) = component along xi."""
        return self.comps[-1]


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def _add_into(acc: dict, key, val):
    if not val:
        return
    cur = acc.get(key)
    acc[key] = val if cur is None else cur + val


def _wedge_dicts(a: dict, b: dict) -> dict:
    out: dict = {}
    for I, x in a.items():
        sI = set(I)
        for K, y in b.items():
            if sI.intersection(K):
                continue
            idx = I + K
            _add_into(out, tuple(sorted(idx)), perm_sign(idx) * (x * y))
    return _clean(out)


def _interior_dict(X: tuple, a: dict) -> dict:
    """iota_X on a horizontal form; X given by its horizontal components."""
    out: dict = {}
    for I, x in a.items():
        for pos, i in enumerate(I):
            c = X[i]
            if not c:
                continue
            sign = -1 if pos % 2 else 1
            _add_into(out, I[:pos] + I[pos + 1:], sign * (c * x))
    return _clean(out)


def _scale_dict(a: dict, c) -> dict:
    return _clean({k: c * v for k, v in a.items()})


def _sum_dicts(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        _add_into(out, k, v if sign > 0 else -v)
    return _clean(out)


@dataclass(frozen=True)
class ModelForm:
    """Homogeneous k-form ``pi*alpha0 + eta ^ pi*alpha1`` on the model.

    Dict keys are strictly increasing tuples of horizontal indices.
    """

    space: FrameSpace
    deg: int
    alpha0: dict = field(default_factory=dict)
    alpha1: dict = field(default_factory=dict)

    def __post_init__(self):
        top = 2 * self.space.n
        for I in self.alpha0:
            if len(I) != self.deg or any(i >= top for i in I) or list(I) != sorted(set(I)):
                raise ValueError(f"bad horizontal index tuple {I} for degree {self.deg}")
        for I in self.alpha1:
            if len(I) != self.deg - 1 or any(i >= top for i in I) or list(I) != sorted(set(I)):
                raise ValueError(f"bad eta-part index tuple {I} for degree {self.deg}")
        object.__setattr__(self, "alpha0", _clean(dict(self.alpha0)))
        object.__setattr__(self, "alpha1", _clean(dict(self.alpha1)))

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, space: FrameSpace, deg: int) -> ModelForm:
        return cls(space, deg)

    @classmethod
    def constant(cls, space: FrameSpace, c) -> ModelForm:
        return cls(space, 0, {(): c})

    @classmethod
    def eta(cls, space: FrameSpace, one=1) -> ModelForm:
        return cls(space, 1, {}, {(): one})

    @classmethod
    def coframe(cls, space: FrameSpace, i: int, one=1) -> ModelForm:
        """Horizontal coframe element e^i (0-based i)."""
        return cls(space, 1, {(i,): one})

    @classmethod
    def omega(cls, space: FrameSpace, one=1) -> ModelForm:
        n = space.n
        return cls(space, 2, {(i, i + n): one for i in range(n)})

    @classmethod
    def omega_power(cls, space: FrameSpace, k: int, one=1) -> ModelForm:
        """pi*omega^k = k! sum over k-subsets of products e^{i,i+n}."""
        n = space.n
        if k == 0:
            return cls.constant(space, one)
        terms = {}
        for S in itertools.combinations(range(n), k):
            idx = tuple(sorted(S + tuple(i + n for i in S)))
            flat = tuple(x for i in S for x in (i, i + n))
            terms[idx] = perm_sign(flat) * math.factorial(k) * one
        return cls(space, 2 * k, terms)

    @classmethod
    def volume_h(cls, space: FrameSpace, one=1) -> ModelForm:
        return cls(space, 2 * space.n, {tuple(range(2 * space.n)): one})

    # -- algebra ----------------------------------------------------------
    def _check(self, other: ModelForm):
        if other.space != self.space:
            raise ValueError("forms live on different frame spaces")

    def __add__(self, other: ModelForm) -> ModelForm:
        self._check(other)
        if other.deg != self.deg:
            if not other.alpha0 and not other.alpha1:
                return self
            if not self.alpha0 and not self.alpha1:
                return other
            raise ValueError("cannot add forms of different degree")
        return ModelForm(self.space, self.deg, _sum_dicts(self.alpha0, other.alpha0),
                         _sum_dicts(self.alpha1, other.alpha1))

    def __sub__(self, other: ModelForm) -> ModelForm:
        return self + (-other)

    def __neg__(self) -> ModelForm:
        return self.scale(-1)

    def scale(self, c) -> ModelForm:
        return ModelForm(self.space, self.deg, _scale_dict(self.alpha0, c), _scale_dict(self.alpha1, c))

    def __rmul__(self, c) -> ModelForm:
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, ModelForm):
            return NotImplemented
        if self.space != other.space:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.deg == other.deg and self.alpha0 == other.alpha0 and self.alpha1 == other.alpha1

    def __hash__(self):
        return hash((self.space, self.deg, frozenset(self.alpha0.items()), frozenset(self.alpha1.items())))

    def is_zero(self) -> bool:
        return not self.alpha0 and not self.alpha1

    def is_basic(self) -> bool:
        """True when the form is a pullback pi*alpha0 (no eta part)."""
        return not self.alpha1

    def terms(self):
        """Iterate ``(indices, coeff)`` in 11-dim coframe labels, xi slot last.

        ``eta ^ e^I`` equals ``(-1)^|I| e^I ^ eta``.
        """
        xi = self.space.xi
        for I, c in self.alpha0.items():
            yield I, c
        for I, c in self.alpha1.items():
            yield I + (xi,), (-c if len(I) % 2 else c)

    def max_abs(self) -> float:
        vals = list(self.alpha0.values()) + list(self.alpha1.values())
        return max((abs(complex(v)) for v in vals), default=0.0)

    def proportionality(self, other: ModelForm):
        """Return c with self == c * other, or None when not proportional."""
        if other.is_zero():
            return None
        key, ref, part = None, None, None
        for name in ("alpha0", "alpha1"):
            d = getattr(other, name)
            if d:
                key, ref = next(iter(d.items()))
                part = name
                break
        c = getattr(self, part).get(key, 0) / ref
        return c if (self - other.scale(c)).is_zero() else None

    def __repr__(self):
        return f"ModelForm(deg={self.deg}, alpha0={self.alpha0}, alpha1={self.alpha1})"

    # -- JSON -------------------------------------------------------------
    def to_json(self) -> dict:
        def enc(d):
            return [{"idx": [i + 1 for i in I], "coeff": str(c)} for I, c in sorted(d.items())]

        return {"deg": self.deg, "terms": enc(self.alpha0), "eta_part": enc(self.alpha1)}

    @classmethod
    def from_json(cls, space: FrameSpace, data: dict, complex_coeffs: bool = False) -> ModelForm:
        parse = parse_complex if complex_coeffs else parse_quad

        def dec(entries):
            out: dict = {}
            for t in entries:
                idx = [int(i) - 1 for i in t["idx"]]
                order = sorted(range(len(idx)), key=idx.__getitem__)
                key = tuple(idx[k] for k in order)
                if len(set(key)) != len(key):
                    continue
                _add_into(out, key, perm_sign(order) * parse(str(t["coeff"])))
            return out

        return cls(space, int(data["deg"]), dec(data.get("terms", [])), dec(data.get("eta_part", [])))


# -- operations ------------------------------------------------------------


def wedge(a: ModelForm, b: ModelForm) -> ModelForm:
    """Exterior product; overflowing degrees give the zero form."""
    a._check(b)
    deg = a.deg + b.deg
    if deg > a.space.dim:
        return ModelForm.zero(a.space, deg)
    alpha0 = _wedge_dicts(a.alpha0, b.alpha0)
    # (a0 + eta a1) ^ (b0 + eta b1) = a0 b0 + eta (a1 b0 + (-1)^|a| a0 b1)
    alpha1 = _sum_dicts(_wedge_dicts(a.alpha1, b.alpha0), _wedge_dicts(a.alpha0, b.alpha1),
                        sign=-1 if a.deg % 2 else 1)
    return ModelForm(a.space, deg, alpha0, alpha1)


def interior(X: FrameVector, a: ModelForm) -> ModelForm:
    """Contraction iota_X, an antiderivation of degree -1."""
    if a.deg < 1:
        return ModelForm.zero(a.space, a.deg - 1)
    h = X.horizontal
    alpha0 = _interior_dict(h, a.alpha0)
    v = X.vertical
    if v:
        alpha0 = _sum_dicts(alpha0, _scale_dict(a.alpha1, v))
    alpha1 = _scale_dict(_interior_dict(h, a.alpha1), -1)
    return ModelForm(a.space, a.deg - 1, alpha0, alpha1)


def inner(a: ModelForm, b: ModelForm):
    """Induced metric g(a, b) on forms; g(eta, eta) = epsilon."""
    a._check(b)
    if a.deg != b.deg:
        return 0
    total = 0
    for I, x in a.alpha0.items():
        y = b.alpha0.get(I)
        if y is not None:
            total = total + x * y
    eps = a.space.epsilon
    for I, x in a.alpha1.items():
        y = b.alpha1.get(I)
        if y is not None:
            total = total + eps * (x * y)
    return total


def volume(space: FrameSpace, one=1) -> ModelForm:
    """vol = epsilon * eta ^ pi*vol_h (so vol = -eta ^ pi*vol_h when Lorentzian)."""
    return ModelForm(space, space.dim, {}, {tuple(range(2 * space.n)): space.epsilon * one})


def hodge(a: ModelForm) -> ModelForm:
    """Hodge star characterised by a ^ *b = g(a, b) vol."""
    sp = a.space
    full = tuple(range(sp.dim))
    xi = sp.xi
    eps = sp.epsilon
    alpha0: dict = {}
    alpha1: dict = {}
    for I, c in a.terms():
        comp = tuple(x for x in full if x not in I)
        gII = eps if xi in I else 1
        # e^I ^ e^{I^c} = s e^{full};  vol = eps e^{full}
        s = perm_sign(I + comp)
        coef = gII * eps * s * c
        if xi in comp:
            J = comp[:-1]
            _add_into(alpha1, J, -coef if len(J) % 2 else coef)
        else:
            _add_into(alpha0, comp, coef)
    return ModelForm(sp, sp.dim - a.deg, _clean(alpha0), _clean(alpha1))


def hodge_base(space: FrameSpace, beta: dict, deg: int) -> dict:
    """Riemannian Hodge star of the base, vol_h = e^1 ^ ... ^ e^2n."""
    full = tuple(range(2 * space.n))
    out: dict = {}
    for I, c in beta.items():
        comp = tuple(x for x in full if x not in I)
        _add_into(out, comp, perm_sign(I + comp) * c)
    return _clean(out)


def model_d(a: ModelForm) -> ModelForm:
    """d(pi*a0 + eta ^ pi*a1) = -2 pi*omega ^ pi*a1 (base forms constant, hence closed)."""
    sp = a.space
    om = ModelForm.omega(sp)
    a1 = ModelForm(sp, a.deg - 1, dict(a.alpha1)) if a.deg >= 1 else ModelForm.zero(sp, 0)
    out = wedge(om, a1).scale(-2)
    return ModelForm(sp, a.deg + 1, out.alpha0, out.alpha1)


def flat(X: FrameVector) -> ModelForm:
    """Metric dual X^flat = sum X^a e^a + epsilon X^xi eta."""
    sp = X.space
    alpha0 = {(a,): c for a, c in enumerate(X.horizontal) if c}
    alpha1 = {(): sp.epsilon * X.vertical} if X.vertical else {}
    return ModelForm(sp, 1, alpha0, alpha1)


def sharp(a: ModelForm) -> FrameVector:
    if a.deg != 1:
        raise ValueError("sharp is defined on 1-forms")
    sp = a.space
    comps = [a.alpha0.get((i,), 0) for i in range(2 * sp.n)]
    comps.append(sp.epsilon * a.alpha1.get((), 0))
    return FrameVector(sp, tuple(comps))


def rational(x) -> Fraction:
    return Fraction(x)


def dense_to_modelform(space: FrameSpace, vec, deg: int, convert=None) -> ModelForm:
    """ModelForm from a dense vector over ``subsets(2n+1, deg)`` (xi slot last)."""
    from .alternating import subsets

    convert = convert or (lambda x: x)
    xi = space.xi
    alpha0: dict = {}
    alpha1: dict = {}
    for I, v in zip(subsets(space.dim, deg), vec):
        if not v:
            continue
        if I and I[-1] == xi:
            J = I[:-1]
            # e^J ^ eta = (-1)^|J| eta ^ e^J
            alpha1[J] = convert(-v if len(J) % 2 else v)
        else:
            alpha0[I] = convert(v)
    return ModelForm(space, deg, alpha0, alpha1)


def horizontal_to_modelform(space: FrameSpace, vec, deg: int, convert=None) -> ModelForm:
    """Pullback pi*beta of a dense base form over ``subsets(2n, deg)``."""
    from .alternating import subsets

    convert = convert or (lambda x: x)
    terms = {I: convert(v) for I, v in zip(subsets(2 * space.n, deg), vec) if v}
    return ModelForm(space, deg, terms)
