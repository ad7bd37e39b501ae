"""Dense alternating forms over R^d and form-valued matrices.

A p-form is a vector indexed by the strictly increasing p-tuples of
``range(d)`` in ``itertools.combinations`` order; its entry at ``I`` is
the value on ``(e_I[0], ..., e_I[p-1])`` (determinant convention, so
``e^1 ^ e^2 (e_1, e_2) = 1``).  A form-valued matrix has shape
``(d, d, C(d, p))``.

All kernels accept float64 arrays or object arrays of Python ints.
Integer kernels switch to int64 when an a-priori bound on every
accumulated sum stays below 2**62, and fall back to object arithmetic
otherwise; exact rational inputs are first scaled to integers with
:func:`integerize`.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

_INT64_LIMIT = 2**62


@lru_cache(maxsize=None)
def subsets(d: int, k: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(d), k))


@lru_cache(maxsize=None)
def subset_index(d: int, k: int) -> dict[tuple[int, ...], int]:
    return {s: i for i, s in enumerate(subsets(d, k))}


def perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def wedge_table(d: int, p: int, q: int):
    """Disjoint pairs (I, J) with target K = I u J and the sign of e^I ^ e^J.

    Rows are sorted by target index so sums can use ``np.add.reduceat``.
    Returns ``(I, J, sign, starts, targets)``.
    """
    target = subset_index(d, p + q)
    rows = []
    for i, a in enumerate(subsets(d, p)):
        sa = set(a)
        for j, b in enumerate(subsets(d, q)):
            if sa.intersection(b):
                continue
            rows.append((target[tuple(sorted(a + b))], i, j, perm_sign(a + b)))
    rows.sort()
    arr = np.array(rows, dtype=np.int64).reshape(-1, 4)
    ks = arr[:, 0]
    starts = np.flatnonzero(np.r_[True, ks[1:] != ks[:-1]]) if len(ks) else ks
    return arr[:, 1], arr[:, 2], arr[:, 3], starts, ks[starts]


# -- integer/float arithmetic helpers --------------------------------------


def is_exact(arr) -> bool:
    return arr.dtype == object


def integerize(arr):
    """Scale an object array of rationals to Python ints: ``arr = out / den``."""
    flat = [Fraction(x) for x in arr.flat]
    den = math.lcm(*(f.denominator for f in flat)) if flat else 1
    out = np.empty(arr.shape, dtype=object)
    out.flat[:] = [f.numerator * (den // f.denominator) for f in flat]
    return out, den


def _maxabs(arr) -> int:
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(x)) for x in arr.flat)
    return int(np.abs(arr).max())


def _work(ops, terms: int):
    """Cast integer operands to int64 when the accumulated sum is bounded."""
    if not any(o.dtype == object or np.issubdtype(o.dtype, np.integer) for o in ops):
        return ops, False
    bound = terms
    for o in ops:
        bound *= max(1, _maxabs(o))
    if bound < _INT64_LIMIT:
        return [o.astype(np.int64) for o in ops], True
    return [o.astype(object) for o in ops], True


def _finish(arr, integer: bool):
    if integer and arr.dtype != object:
        out = np.empty(arr.shape, dtype=object)
        out.flat[:] = [int(x) for x in arr.flat]
        return out
    return arr


def einsum(subscripts: str, *ops, terms: int):
    """``np.einsum`` with overflow-safe integer handling.

    ``terms`` bounds the number of products summed into one output entry.
    """
    work, integer = _work(list(ops), terms)
    return _finish(np.einsum(subscripts, *work), integer)


def _reduce_pairs(vals, d: int, p: int, q: int, sign, starts, targets):
    """Sum signed pair products into the (p+q)-form slots (last axis)."""
    lead = vals.shape[:-1]
    out = np.zeros(lead + (math.comb(d, p + q),), dtype=vals.dtype)
    if vals.shape[-1] == 0:
        return out
    signed = vals * sign.astype(vals.dtype) if vals.dtype != object else vals * np.array(
        [int(s) for s in sign], dtype=object
    )
    summed = np.add.reduceat(signed, starts, axis=-1)
    out[..., targets] = summed
    return out


# -- forms and form-valued matrices ----------------------------------------


def wedge(a, p: int, b, q: int, d: int):
    if p + q > d:
        return np.zeros(0, dtype=a.dtype)
    I, J, sign, starts, targets = wedge_table(d, p, q)
    work, integer = _work([a, b], math.comb(p + q, p))
    vals = work[0][I] * work[1][J]
    return _finish(_reduce_pairs(vals, d, p, q, sign, starts, targets), integer)


def two_form_matrix(M):
    """Form-valued matrix of 2-forms from endomorphisms ``M[a, b]`` (shape d,d,d,d).

    ``M[a, b]`` is the matrix of R(e_a, e_b); the result has entry
    ``[r, c, (a<b)] = M[a, b, r, c]``.
    """
    d = M.shape[0]
    pairs = subsets(d, 2)
    a = [i for i, _ in pairs]
    b = [j for _, j in pairs]
    return np.transpose(M[a, b], (1, 2, 0))


def form_matmul(A, p: int, B, q: int):
    """Matrix product of form-valued matrices with the wedge product."""
    d = A.shape[0]
    I, J, sign, starts, targets = wedge_table(d, p, q)
    terms = d * math.comb(p + q, p)
    work, integer = _work([A, B], terms)
    vals = np.einsum("rkp,kcp->rcp", work[0][:, :, I], work[1][:, :, J])
    return _finish(_reduce_pairs(vals, d, p, q, sign, starts, targets), integer)


def form_trace_product(A, p: int, B, q: int):
    """``Tr(A ^ B)`` for form-valued matrices A (p-forms) and B (q-forms)."""
    d = A.shape[0]
    if p + q > d:
        return np.zeros(0, dtype=A.dtype)
    I, J, sign, starts, targets = wedge_table(d, p, q)
    terms = d * d * math.comb(p + q, p)
    work, integer = _work([A, B], terms)
    vals = np.einsum("rkp,krp->p", work[0][:, :, I], work[1][:, :, J])
    return _finish(_reduce_pairs(vals, d, p, q, sign, starts, targets), integer)


def left_multiply(P, A):
    """``P @ A`` componentwise for a plain matrix P and form-valued A."""
    return einsum("rk,kcp->rcp", P, A, terms=P.shape[0])


def form_trace(A):
    return einsum("rrp->p", A, terms=A.shape[0])


# -- the literal permutation sum -------------------------------------------


@lru_cache(maxsize=None)
def pair_sequences(m: int, cyclic: bool):
    """Ordered sequences of m sorted pairs partitioning ``range(2m)``, with signs.

    Every permutation sigma of ``range(2m)`` is one such sequence up to
    swapping inside pairs (2**m choices, each flipping the sign and the
    antisymmetric factor together).  With ``cyclic`` only sequences whose
    first pair contains 0 are kept, since cyclic rotation of the pairs is
    an even permutation and leaves a trace unchanged (m rotations each).
    """
    out = []

    def rec(rest, acc):
        if not rest:
            flat = [x for pr in acc for x in pr]
            out.append((tuple(acc), perm_sign(flat)))
            return
        for a, b in itertools.combinations(rest, 2):
            nxt = [x for x in rest if x != a and x != b]
            rec(nxt, acc + [(a, b)])

    if cyclic:
        rest = list(range(1, 2 * m))
        for b in rest:
            rec([x for x in rest if x != b], [(0, b)])
    else:
        rec(list(range(2 * m)), [])
    return tuple(out)


def permutation_trace_sum(M, m: int, pre=None):
    """``sum_sigma sgn(sigma) Tr(pre . M(x_s1, x_s2) ... M(x_s(2m-1), x_s(2m)))``.

    Evaluated on every 2m-subset of basis vectors; returns a 2m-form
    vector (before any 1/(2m)! normalisation).  ``M[a, b]`` are the
    endomorphism matrices (antisymmetric in a, b).
    """
    d = M.shape[0]
    if m < 1 or m > 4:
        raise ValueError("permutation_trace_sum supports 1 <= m <= 4")
    cyclic = pre is None
    seqs = pair_sequences(m, cyclic)
    factor = 2**m * (m if cyclic else 1)
    pidx = subset_index(d, 2)
    comps = subsets(d, 2 * m)
    n_seq = len(seqs)
    # pair ids for every (component, sequence, slot)
    ids = np.empty((len(comps), n_seq, m), dtype=np.int64)
    signs = np.array([s for _, s in seqs], dtype=np.int64)
    for ci, comp in enumerate(comps):
        for si, (pairs, _) in enumerate(seqs):
            for t, (x, y) in enumerate(pairs):
                ids[ci, si, t] = pidx[(comp[x], comp[y])]
    mats = M[[a for a, _ in subsets(d, 2)], [b for _, b in subsets(d, 2)]]  # (P, d, d)
    if pre is not None:
        left1 = einsum("rk,pkc->prc", pre, mats, terms=d)
    else:
        left1 = mats
    if m == 1:
        vals = form_trace_of_batch(left1)[ids[:, :, 0]]
    else:
        n_left = (m + 1) // 2
        L = left1
        if n_left == 2:
            L = einsum("prk,qkc->pqrc", left1, mats, terms=d)
        R = mats
        if m - n_left == 2:
            R = einsum("prk,qkc->pqrc", mats, mats, terms=d)
        Lf = L.reshape(-1, d, d)
        Rf = R.reshape(-1, d, d)
        P = mats.shape[0]
        if n_left == 2:
            li = ids[:, :, 0] * P + ids[:, :, 1]
        else:
            li = ids[:, :, 0]
        if m - n_left == 2:
            ri = ids[:, :, n_left] * P + ids[:, :, n_left + 1]
        else:
            ri = ids[:, :, n_left]
        work, integer = _work([Lf, Rf], d * d * n_seq)
        Lw, Rw = work
        vals = np.empty(li.shape, dtype=Lw.dtype)
        # chunk over components to bound memory
        step = max(1, 20000 // n_seq)
        for c0 in range(0, len(comps), step):
            sl = slice(c0, c0 + step)
            vals[sl] = np.einsum("nsrc,nscr->ns", Lw[li[sl]], Rw[ri[sl]])
        vals = _finish(vals, integer)
    if vals.dtype == object:
        sg = np.array([int(s) for s in signs], dtype=object)
        total = (vals * sg).sum(axis=1) * factor
    else:
        total = (vals * signs).sum(axis=1) * factor
    return total


def form_trace_of_batch(mats):
    return einsum("prr->p", mats, terms=mats.shape[-1])
