"""Analysis and synthesis sums over dyadic lattices.

Coefficients live on level lattices 2^-k m, m integer, k = 0..K.  With the
unitary centered transform F and level multipliers M_k:

  analysis:   lam[k, m] = 2^{-k n / 2} * (F^-1 [conj(M_k) F f]) (2^-k m)
  synthesis:  f = sum_k 2^{-k n / 2} h^{-n} F^-1 [M_k F comb_k],

where comb_k holds lam[k, m] at the grid index of 2^-k m and 0 elsewhere.
The level-k lattice embeds in the grid when the stride 2^-k / h is a
positive integer, i.e. k <= log2(G / L).  Nonzero spectral copies made by
the lattice subsampling sit 2 pi 2^k apart while the multiplier support
has radius 2^{k+1} < 2 pi 2^k / 2, so no copy overlaps: for fields
band-limited to the system's band the round trip is exact up to rounding.

Coefficient sets serialise to a line-oriented text format with %.17g
fields, which round-trips complex128 bit-exactly.
"""

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .grid import SampledField, spectral_transform


@dataclass(frozen=True)
class CoeffSeq:
    """Sparse dyadic coefficients: (level k, lattice index tuple) -> value."""

    n: int
    K: int
    L: float
    entries: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.K < 0:
            raise ValueError("K must be >= 0")
        for (k, m) in self.entries:
            if not 0 <= k <= self.K:
                raise ValueError(f"entry level {k} outside 0..{self.K}")
            if len(m) != self.n:
                raise ValueError(f"entry index {m} is not {self.n}-dimensional")

    def level_entries(self, k):
        return {m: v for (kk, m), v in self.entries.items() if kk == k}

    def map_values(self, fn):
        return CoeffSeq(self.n, self.K, self.L,
                        {key: fn(val) for key, val in self.entries.items()})

    def scaled(self, factor):
        return self.map_values(lambda v: v * factor)


def lattice_span(L, k):
    """Half-open integer index range [-2^k L / 2, 2^k L / 2) per axis."""
    half = (1 << k) * L / 2.0
    if half != int(half) or int(half) < 1:
        raise ValueError(f"level {k} lattice does not tile the period L = {L}")
    return int(half)


def _level_stride(field, k):
    stride = field.G // (1 << k) / field.L
    if stride != int(stride) or int(stride) < 1:
        raise ValueError(
            f"level {k} lattice (spacing 2^-{k}) does not embed in the grid "
            f"(h = {field.h:g})")
    return int(stride)


def analyze(field, system):
    """Inner products of the field against every lattice translate."""
    system.check_grid(field)
    if field.domain != "space":
        raise ValueError("expected a space-domain field")
    n, G = field.n, field.G
    spec = spectral_transform(field)
    entries = {}
    for k in range(system.K + 1):
        stride = _level_stride(field, k)
        half = lattice_span(field.L, k)
        u = spectral_transform(
            spec.with_values(spec.values * system.multipliers[k]))
        scale = 2.0 ** (-k * n / 2.0)
        offsets = [(np.arange(-half, half) * stride + G // 2) for _ in range(n)]
        mesh = np.meshgrid(*offsets, indexing="ij")
        sub = u.values[tuple(mesh)]
        it = np.nditer(sub, flags=["multi_index"])
        for val in it:
            m = tuple(int(i) - half for i in it.multi_index)
            entries[(k, m)] = complex(val) * scale
    return CoeffSeq(n, system.K, field.L, entries)


def synthesize(coeffs, system):
    """Weighted sum of lattice translates of the synthesis kernels."""
    if (coeffs.n, coeffs.L, coeffs.K) != (system.n, system.L, system.K):
        raise ValueError("coefficient set does not match the system")
    n, G, L = system.n, system.G, system.L
    h = L / G
    acc = np.zeros((G,) * n, dtype=np.complex128)
    probe = SampledField(n, L, G, acc, domain="space")
    for k in range(system.K + 1):
        level = coeffs.level_entries(k)
        if not level:
            continue
        stride = _level_stride(probe, k)
        half = lattice_span(L, k)
        comb = np.zeros((G,) * n, dtype=np.complex128)
        for m, val in level.items():
            if any(not -half <= c < half for c in m):
                raise ValueError(f"lattice index {m} outside level {k} span")
            pos = tuple(c * stride + G // 2 for c in m)
            comb[pos] += val
        spec = spectral_transform(SampledField(n, L, G, comb, domain="space"))
        cut = spec.with_values(spec.values * system.multipliers[k])
        acc = acc + spectral_transform(cut).values * (2.0 ** (-k * n / 2.0) / h ** n)
    return SampledField(n, L, G, acc, domain="space")


def roundtrip_error(field, system):
    """Relative l2 error of synthesize(analyze(f)) against f."""
    back = synthesize(analyze(field, system), system)
    ref = math.sqrt(float(np.sum(np.abs(field.values) ** 2)))
    if ref == 0.0:
        raise ValueError("zero field has no relative error")
    diff = math.sqrt(float(np.sum(np.abs(back.values - field.values) ** 2)))
    return diff / ref


COEFF_MAGIC = "herzcoeffs 1"


def save_coeffs(coeffs, path):
    """Text snapshot; %.17g per float round-trips bit-exactly."""
    lines = [COEFF_MAGIC,
             f"n={coeffs.n} K={coeffs.K} L={coeffs.L:.17g} count={len(coeffs.entries)}"]
    for (k, m) in sorted(coeffs.entries):
        v = coeffs.entries[(k, m)]
        idx = " ".join(str(c) for c in m)
        lines.append(f"{k} {idx} {v.real:.17g} {v.imag:.17g}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_coeffs(path):
    with open(path, "r", encoding="ascii") as fh:
        magic = fh.readline().rstrip("\n")
        if magic != COEFF_MAGIC:
            raise ValueError(f"not a coefficient snapshot: {magic!r}")
        head = dict(part.split("=") for part in fh.readline().split())
        n, K, L = int(head["n"]), int(head["K"]), float(head["L"])
        count = int(head["count"])
        entries = {}
        for _ in range(count):
            toks = fh.readline().split()
            if len(toks) != n + 3:
                raise ValueError("malformed coefficient line")
            k = int(toks[0])
            m = tuple(int(t) for t in toks[1:n + 1])
            entries[(k, m)] = complex(float(toks[n + 1]), float(toks[n + 2]))
    return CoeffSeq(n, K, L, entries)
