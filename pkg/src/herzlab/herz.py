"""Mixed-norm Herz quantities of sampled fields.

The norm treats a field as piecewise constant on the half-open grid cells
[x_j, x_j + h).  Along one axis the weighted annulus sum is computed by exact
measure arithmetic: a cell with index m >= 1 lies in the single annulus
2^(k-1) <= |x| < 2^k with k = 1 - v + floor(log2(m)) (cell side 2^-v), a cell
with m <= -2 in the one with k = 1 - v + floor(log2(-m-1)), and the two cells
touching the origin (m = 0, -1) meet every annulus k <= -v with measure
2^(k-1) per side, which is summed in closed geometric form.  The series
converges exactly when alpha + 1/p > 0, the admissibility condition enforced
by :class:`HerzParams`.  Nothing is dropped, so for alpha = 0, q = p the
mixed Herz norm reproduces the mixed Lebesgue norm to rounding error.

Axis 1 is innermost: ``mixed_herz_norm`` reduces the x1 axis first, then x2,
then x3.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grid import SampledField, _log2_exact


class HypothesisError(ValueError):
    """A checker was asked to run outside its theorem's hypotheses."""


def _inv(p):
    """1/p with the convention 1/inf = 0."""
    return 0.0 if math.isinf(p) else 1.0 / p


def _as_exponent_tuple(t, n, name):
    if np.isscalar(t):
        t = (t,) * n
    t = tuple(float(x) for x in t)
    if len(t) != n:
        raise ValueError(f"{name} has length {len(t)}, expected {n}")
    return t


@dataclass(frozen=True)
class HerzParams:
    """Per-axis exponents (p_i, alpha_i, q_i) of a mixed Herz norm.

    0 < p_i, q_i <= inf and alpha_i > -1/p_i (admissibility; the inner
    annulus tail diverges otherwise).
    """

    p: tuple
    alpha: tuple
    q: tuple

    def __post_init__(self):
        n = len(self.p) if not np.isscalar(self.p) else 1
        object.__setattr__(self, "p", _as_exponent_tuple(self.p, n, "p"))
        object.__setattr__(self, "alpha", _as_exponent_tuple(self.alpha, n, "alpha"))
        object.__setattr__(self, "q", _as_exponent_tuple(self.q, n, "q"))
        for i, (p, a, q) in enumerate(zip(self.p, self.alpha, self.q)):
            if not p > 0:
                raise ValueError(f"p[{i}] = {p} must be positive")
            if not q > 0:
                raise ValueError(f"q[{i}] = {q} must be positive")
            if not a > -_inv(p):
                # alpha_i > -1/p_i, with 1/inf = 0
                raise ValueError(
                    f"inadmissible alpha[{i}] = {a} <= -1/p[{i}] = {-_inv(p)}")

    @property
    def n(self):
        return len(self.p)

    def bold_inv_p(self):
        """sum_i 1/p_i."""
        return sum(_inv(p) for p in self.p)

    def bold_alpha(self):
        """sum_i alpha_i."""
        return sum(self.alpha)

    def p_minus(self):
        return min(self.p)

    def q_minus(self):
        return min(self.q)


def _axis_reduce_herz(mag, lo, v, p, alpha, q):
    """Exact one-axis Herz reduction of cell magnitudes.

    mag : (C, M) nonnegative float64; row r holds cell index m = lo + r along
        the reduced axis, columns enumerate the remaining positions.
    v : cells have side 2^-v.
    Returns the (M,) array of K(p, alpha, q) norms in that axis variable.
    """
    C, M = mag.shape
    hi = lo + C
    mu = 2.0 ** (-v)
    p_inf = math.isinf(p)
    q_inf = math.isinf(q)
    if not p_inf:
        pw = mag ** p

    terms = []
    max_abs = max(hi - 1, -lo)
    j = 0
    while (1 << j) <= max_abs:
        k = 1 - v + j
        w = 2.0 ** (k * alpha)
        p0, p1 = max(1 << j, lo), min(1 << (j + 1), hi)
        n0, n1 = max(-(1 << (j + 1)), lo), min(-(1 << j), hi)
        if p_inf:
            nrm = np.zeros(M)
            if p1 > p0:
                np.maximum(nrm, mag[p0 - lo:p1 - lo].max(axis=0), out=nrm)
            if n1 > n0:
                np.maximum(nrm, mag[n0 - lo:n1 - lo].max(axis=0), out=nrm)
        else:
            mass = np.zeros(M)
            if p1 > p0:
                mass += pw[p0 - lo:p1 - lo].sum(axis=0)
            if n1 > n0:
                mass += pw[n0 - lo:n1 - lo].sum(axis=0)
            nrm = (mass * mu) ** (1.0 / p)
        terms.append(w * nrm)
        j += 1

    # cells m = 0 and m = -1 cross every annulus k <= -v; closed-form tail
    a = mag[0 - lo] if lo <= 0 < hi else np.zeros(M)
    b = mag[-1 - lo] if lo <= -1 < hi else np.zeros(M)
    if p_inf:
        base = np.maximum(a, b)
        glog = alpha            # tail term at k: base * 2^(k*alpha)
        top = base * 2.0 ** (-v * alpha)
    else:
        base = (a ** p + b ** p) ** (1.0 / p)
        glog = alpha + 1.0 / p  # tail term at k: base*2^(-1/p)*2^(k*glog)
        top = base * 2.0 ** (-1.0 / p - v * glog)
    # glog > 0 by admissibility, so the tail is geometric with top term at
    # k = -v and ratio 2^-glog.

    if q_inf:
        out = top.copy()
        for t in terms:
            np.maximum(out, t, out=out)
        return out

    stack = np.vstack(terms) if terms else np.zeros((0, M))
    peak = np.maximum(stack.max(axis=0) if terms else np.zeros(M), top)
    safe = np.where(peak > 0.0, peak, 1.0)
    s = ((stack / safe) ** q).sum(axis=0)
    s += (top / safe) ** q / (1.0 - 2.0 ** (-glog * q))
    return np.where(peak > 0.0, safe * s ** (1.0 / q), 0.0)


def lq_combine(values, q):
    """Finite l^q sum of nonnegative terms, max-normalised for stability.

    With a single nonzero term the result equals that term exactly, for any
    q; q = inf is the maximum.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return 0.0
    if np.any(v < 0.0):
        raise ValueError("lq_combine expects nonnegative terms")
    peak = float(v.max())
    if peak == 0.0:
        return 0.0
    if math.isinf(q):
        return peak
    return peak * float(np.sum((v / peak) ** q)) ** (1.0 / q)


def _axis_reduce_lp(mag, p, mu):
    """(sum |f|^p mu)^(1/p) down the first dimension, or max for p = inf."""
    if math.isinf(p):
        return mag.max(axis=0)
    return (np.sum(mag ** p, axis=0) * mu) ** (1.0 / p)


def _grid_cell_layout(field):
    """(lo, v) of the grid-cell lattice: indices m in [-G/2, G/2), side 2^-v."""
    v = _log2_exact(field.G) - _log2_exact(field.L)
    return -field.G // 2, v


def axis_lp_norm(field, axis, p):
    """L^p norm in the coordinate x_axis alone; collapses that axis.

    Returns a SampledField of dimension n-1, or a float when n = 1.
    """
    if not p > 0:
        raise ValueError(f"p = {p} must be positive")
    mag = np.abs(np.moveaxis(field.values, axis, 0))
    rest = mag.shape[1:]
    out = _axis_reduce_lp(mag.reshape(field.G, -1), p, field.h)
    if field.n == 1:
        return float(out[0])
    return SampledField(field.n - 1, field.L, field.G, out.reshape(rest),
                        field.domain)


def axis_herz_norm(field, axis, p, alpha, q):
    """One-axis Herz norm K(p, alpha, q) in x_axis; collapses that axis."""
    HerzParams((p,), (alpha,), (q,))  # validate admissibility
    lo, v = _grid_cell_layout(field)
    mag = np.abs(np.moveaxis(field.values, axis, 0))
    rest = mag.shape[1:]
    out = _axis_reduce_herz(mag.reshape(field.G, -1), lo, v, p, alpha, q)
    if field.n == 1:
        return float(out[0])
    return SampledField(field.n - 1, field.L, field.G, out.reshape(rest),
                        field.domain)


def mixed_herz_norm(field, params):
    """Iterated per-axis Herz norm, axis 1 innermost.

    params : HerzParams with params.n == field.n.
    """
    if params.n != field.n:
        raise ValueError(f"params for n = {params.n}, field has n = {field.n}")
    lo, v = _grid_cell_layout(field)
    arr = np.abs(field.values)
    for i in range(field.n):
        G = arr.shape[0]
        rest = arr.shape[1:]
        arr = _axis_reduce_herz(arr.reshape(G, -1), lo, v,
                                params.p[i], params.alpha[i], params.q[i])
        arr = arr.reshape(rest)
    return float(arr)


def mixed_lebesgue_norm(field, p):
    """Iterated per-axis L^p norm, axis 1 innermost; p is scalar or n-tuple."""
    p = _as_exponent_tuple(p, field.n, "p")
    arr = np.abs(field.values)
    for i in range(field.n):
        G = arr.shape[0]
        rest = arr.shape[1:]
        arr = _axis_reduce_lp(arr.reshape(G, -1), p[i], field.h)
        arr = arr.reshape(rest)
    return float(arr)
