"""Sequence-space norms over dyadic cell lattices.

A coefficient lam[k, m] carries the normalised indicator 2^{k n / 2} of the
cell 2^-k (m + [0, 1)^n).  Level carriers g_k = sum_m |lam[k, m]| 2^{k n / 2}
chi_{k,m} are piecewise constant on dyadic cells, so their mixed Herz norms
are computed by the same exact measure arithmetic as sampled fields, with
no sampling step:

  b-norm: l^beta over k of 2^{k s} * herz(g_k)
  f-norm: herz of (sum_k (2^{k s} g_k)^beta)^(1/beta), assembled exactly on
          the finest occupied level's tiling.

lambda_star is the discretised peak majorant
(sum_h |lam[k, h]|^r (1 + |h - m|)^-d)^(1/r) per level, evaluated on the
occupied bounding box dilated by a window margin; r = inf takes the sup
form.  The window is a truncation, so callers gauge it by doubling.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _accel
from .frames import CoeffSeq
from .herz import HerzParams, _axis_reduce_herz, lq_combine


@dataclass(frozen=True)
class SeqSpaceParams:
    """Herz layer plus smoothness s and level exponent beta for sequences."""

    herz: HerzParams
    s: float
    beta: float
    family: str

    def __post_init__(self):
        if self.family not in ("b", "f"):
            raise ValueError("family must be 'b' or 'f'")
        if not self.beta > 0.0:
            raise ValueError("beta must be positive")
        if self.family == "f":
            for name, vec in (("p", self.herz.p), ("q", self.herz.q)):
                if any(math.isinf(e) for e in vec):
                    raise ValueError(
                        f"family 'f' requires finite {name}, got {vec}")


def _cells_mixed_herz(arr, los, v, herz):
    """Exact mixed Herz norm of a cell array (side 2^-v, corner index los)."""
    for i in range(herz.n):
        C = arr.shape[0]
        rest = arr.shape[1:]
        arr = _axis_reduce_herz(arr.reshape(C, -1), los[i], v,
                                herz.p[i], herz.alpha[i], herz.q[i])
        arr = arr.reshape(rest)
    return float(arr)


def _level_box(level):
    pos = np.array(sorted(level), dtype=np.int64)
    los = pos.min(axis=0)
    his = pos.max(axis=0) + 1
    return pos, los, his


def _level_cells(level):
    """Dense |lam| array over the bounding box of one level."""
    pos, los, his = _level_box(level)
    arr = np.zeros(tuple(his - los))
    for m, val in level.items():
        arr[tuple(np.array(m, dtype=np.int64) - los)] += abs(val)
    return arr, los


def b_norm(coeffs, params):
    """l^beta over levels of weighted exact cell-carrier Herz norms."""
    if params.herz.n != coeffs.n:
        raise ValueError(f"params for n = {params.herz.n}, coeffs have n = {coeffs.n}")
    n = coeffs.n
    terms = []
    for k in range(coeffs.K + 1):
        level = coeffs.level_entries(k)
        if not level:
            terms.append(0.0)
            continue
        arr, los = _level_cells(level)
        t = _cells_mixed_herz(arr, los, k, params.herz)
        terms.append(2.0 ** (k * (params.s + n / 2.0)) * t)
    return lq_combine(np.array(terms), params.beta)


def f_norm(coeffs, params):
    """Herz norm of the pointwise l^beta envelope across levels.

    The envelope is assembled exactly on the finest occupied level: each
    coefficient cell covers a full block of finest cells.
    """
    if params.family != "f":
        raise ValueError("f_norm needs family 'f' parameters")
    if params.herz.n != coeffs.n:
        raise ValueError(f"params for n = {params.herz.n}, coeffs have n = {coeffs.n}")
    n = coeffs.n
    occupied = [k for k in range(coeffs.K + 1) if
                any(kk == k for (kk, _) in coeffs.entries)]
    if not occupied:
        return 0.0
    vf = max(occupied)
    # union bounding box, in finest-level indices
    los = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
    his = np.full(n, np.iinfo(np.int64).min, dtype=np.int64)
    for (k, m) in coeffs.entries:
        scale = 1 << (vf - k)
        mm = np.array(m, dtype=np.int64)
        los = np.minimum(los, mm * scale)
        his = np.maximum(his, (mm + 1) * scale)
    beta = params.beta
    env = np.zeros(tuple(his - los))
    for (k, m), val in coeffs.entries.items():
        scale = 1 << (vf - k)
        mm = np.array(m, dtype=np.int64)
        sl = tuple(slice(int(c * scale - l), int((c + 1) * scale - l))
                   for c, l in zip(mm, los))
        contrib = 2.0 ** (k * (params.s + n / 2.0)) * abs(val)
        if math.isinf(beta):
            np.maximum(env[sl], contrib, out=env[sl])
        else:
            env[sl] += contrib ** beta
    if not math.isinf(beta):
        env = env ** (1.0 / beta)
    return _cells_mixed_herz(env, los, vf, params.herz)


def seq_norm(coeffs, params):
    if params.family == "b":
        return b_norm(coeffs, params)
    return f_norm(coeffs, params)


def lambda_star(coeffs, r, d, window):
    """Windowed peak majorant of a coefficient set, level by level.

    Evaluates (sum_h |lam[k, h]|^r (1 + |h - m|)^-d)^(1/r) (sup form for
    r = inf) at every lattice index m in the occupied bounding box dilated
    by ``window`` cells per side.  |h - m| is the Euclidean index distance.
    """
    if not (r > 0.0):
        raise ValueError("r must be positive")
    if d <= 0.0:
        raise ValueError("d must be positive")
    if window < 0:
        raise ValueError("window must be >= 0")
    n = coeffs.n
    entries = {}
    for k in range(coeffs.K + 1):
        level = coeffs.level_entries(k)
        if not level:
            continue
        pos, los, his = _level_box(level)
        mag = np.array([abs(level[tuple(p)]) for p in pos])
        axes = [np.arange(lo - window, hi + window, dtype=np.int64)
                for lo, hi in zip(los, his)]
        mesh = np.meshgrid(*axes, indexing="ij")
        targets = np.stack([m.ravel() for m in mesh], axis=1)
        if math.isinf(r):
            out = _accel.lambda_star_max(mag, pos, targets, float(d))
        else:
            out = _accel.lambda_star_sum(mag ** r, pos, targets, float(d)) \
                ** (1.0 / r)
        for row, val in zip(targets, out):
            entries[(k, tuple(int(c) for c in row))] = complex(val)
    return CoeffSeq(n, coeffs.K, coeffs.L, entries)


@dataclass(frozen=True)
class RearrangedProfile:
    """Decreasing rearrangement as a step profile: values with widths."""

    values: np.ndarray
    widths: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        w = np.asarray(self.widths, dtype=np.float64)
        if v.shape != w.shape or v.ndim != 1 or v.size == 0:
            raise ValueError("values and widths must be matching 1d arrays")
        if np.any(v < 0.0) or np.any(w <= 0.0):
            raise ValueError("values must be >= 0 and widths > 0")
        order = np.argsort(-v, kind="stable")
        object.__setattr__(self, "values", v[order])
        object.__setattr__(self, "widths", w[order])

    @classmethod
    def from_field(cls, field):
        mags = np.abs(field.values).ravel()
        return cls(mags, np.full(mags.shape, field.h ** field.n))

    def total_width(self):
        return float(self.widths.sum())

    def value_at(self, t):
        """f*(t): the value on the step containing measure t."""
        if t < 0.0:
            raise ValueError("t must be >= 0")
        cum = np.cumsum(self.widths)
        i = int(np.searchsorted(cum, t, side="right"))
        return float(self.values[i]) if i < self.values.size else 0.0

    def lp_norm(self, p):
        if math.isinf(p):
            return float(self.values[0])
        return float(np.sum(self.values ** p * self.widths)) ** (1.0 / p)

    def dyadic_sum(self, p):
        """(sum_j 2^j f*(2^j)^p)^(1/p) over all integers j, exactly.

        For 2^j below the first step width f* is constant, so that tail is
        the closed form 2^(j0+1) f*(0)^p; the rest is a finite sum.
        """
        if math.isinf(p):
            return float(self.values[0])
        v0 = float(self.values[0])
        if v0 == 0.0:
            return 0.0
        w0 = float(self.widths[0])
        j0 = math.floor(math.log2(w0))
        if 2.0 ** j0 >= w0:
            j0 -= 1
        total = self.total_width()
        acc = 2.0 ** (j0 + 1) * v0 ** p
        j = j0 + 1
        while 2.0 ** j < total:
            acc += 2.0 ** j * self.value_at(2.0 ** j) ** p
            j += 1
        return acc ** (1.0 / p)
