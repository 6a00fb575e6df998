"""Acceptance checklist.

Every numbered criterion below prints one visible ``criterion NN: PASS/FAIL``
line and enforces its stated tolerance and, where given, its time budget.
Run with ``pytest -v``; the lines print unbuffered past pytest's capture.
"""

import math
import time

import numpy as np
import pytest

from herzlab import (CoeffSeq, EmbeddingSpec, HerzParams, SeqSpaceParams,
                     SpaceParams, b_norm, besov_norm, build_fj_pair,
                     build_resolution, dilation_scan, f_norm, hardy_check,
                     lambda_star, lq_combine, make_field, mixed_herz_norm,
                     mixed_lebesgue_norm, necessity_fit, partition_sum,
                     ppn_check, random_band_field, roundtrip_error,
                     seq_embedding_check, space_norm)
from herzlab.cli import ExperimentConfig, bump_family, render_report, run_config
from herzlab.maximal import fs_vector_check


def _report(capsys, num, ok, desc):
    with capsys.disabled():
        print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} {desc}")
    assert ok, f"criterion {num}: {desc}"


def _fit_slope(xs, ys):
    return float(np.polyfit(np.asarray(xs, float), np.asarray(ys, float), 1)[0])


# -- 1 ----------------------------------------------------------------------

def test_criterion_01_lebesgue_coincidence(capsys):
    t0 = time.time()
    worst = 0.0
    for i in range(50):
        rng = np.random.default_rng(1000 + i)
        f1 = make_field(1, 16.0, 1024).with_values(
            rng.standard_normal(1024) + 1j * rng.standard_normal(1024))
        f2 = make_field(2, 16.0, 256).with_values(
            rng.standard_normal((256, 256)) + 1j * rng.standard_normal((256, 256)))
        for p in (1.0, 2.0, 4.0):
            for f, n in ((f1, 1), (f2, 2)):
                herz = mixed_herz_norm(f, HerzParams((p,) * n, (0.0,) * n, (p,) * n))
                leb = mixed_lebesgue_norm(f, p)
                worst = max(worst, abs(herz - leb) / leb)
    elapsed = time.time() - t0
    _report(capsys, 1, worst <= 1e-10 and elapsed <= 10.0,
            f"norms coincide at p = q, zero weight (worst rel {worst:.2e}, "
            f"{elapsed:.1f}s on 100 fields)")


# -- 2 ----------------------------------------------------------------------

def test_criterion_02_dilation_law(capsys):
    t0 = time.time()
    sets = [(2.0, 0.25, 1.0), (1.0, 0.0, 2.0), (4.0, -0.125, 0.5),
            (math.inf, 0.5, 2.0), (2.0, 0.25, math.inf)]
    worst = 0.0
    for i, (p, alpha, q) in enumerate(sets):
        rep = dilation_scan(HerzParams(p, alpha, q), 0.0, 1, 8.0, 256, 4,
                            seed=200 + i)
        assert rep["expected"] == -(alpha + (0.0 if math.isinf(p) else 1.0 / p))
        worst = max(worst, abs(rep["slope"] - rep["expected"]))
    elapsed = time.time() - t0
    _report(capsys, 2, worst <= 1e-3 and elapsed <= 30.0,
            f"dilation slope matches -(alpha + 1/p) (worst err {worst:.2e}, "
            f"{elapsed:.1f}s, 5 parameter sets, N = 0..4)")


# -- 3 ----------------------------------------------------------------------

def test_criterion_03_partition_identity(capsys):
    worst = 0.0
    xi = (np.arange(1024) - 512) * (2.0 * np.pi / 16.0)
    for K in range(1, 7):
        for builder in (build_resolution, build_fj_pair):
            system = builder(1, 16.0, 1024, K)
            total = partition_sum(system)
            inside = np.abs(xi) <= system.band_radius()
            worst = max(worst, float(np.max(np.abs(total[inside] - 1.0))))
    for builder in (build_resolution, build_fj_pair):
        system = builder(2, 16.0, 256, 3)
        total = partition_sum(system)
        xi2 = (np.arange(256) - 128) * (2.0 * np.pi / 16.0)
        rad = np.hypot(xi2[:, None], xi2[None, :])
        worst = max(worst, float(np.max(np.abs(total[rad <= 8.0] - 1.0))))
    _report(capsys, 3, worst <= 1e-12,
            f"partition identities hold on the band up to K = 6 "
            f"(worst dev {worst:.2e})")


# -- 4 ----------------------------------------------------------------------

def test_criterion_04_transform_roundtrip(capsys):
    worst = 0.0
    sys1 = build_fj_pair(1, 16.0, 4096, 6)
    for seed in range(50):
        f = random_band_field(1, 16.0, 4096, sys1.band_radius(), seed=seed)
        worst = max(worst, roundtrip_error(f, sys1))
    sys2 = build_fj_pair(2, 16.0, 512, 3)
    for seed in range(50):
        f = random_band_field(2, 16.0, 512, sys2.band_radius(), seed=seed)
        worst = max(worst, roundtrip_error(f, sys2))
    _report(capsys, 4, worst <= 1e-8,
            f"analysis/synthesis round trip on 100 band-limited fields "
            f"(worst rel {worst:.2e})")


# -- 5 ----------------------------------------------------------------------

def test_criterion_05_constant_one_monotonicity(capsys):
    system = build_fj_pair(1, 16.0, 1024, 4)
    ok = True
    for seed in range(100):
        f = random_band_field(1, 16.0, 1024, system.band_radius(), seed=seed)
        for family, betas in (("B", (0.5, 1.0, 2.0, math.inf)),
                              ("F", (0.5, 1.0, 2.0))):
            chain = [space_norm(f, SpaceParams(HerzParams(2.0, 0.25, 1.0),
                                               0.5, b, family), system)
                     for b in betas]
            ok = ok and all(a >= b for a, b in zip(chain, chain[1:]))
        for family, qs in (("B", (0.5, 1.0, 2.0, math.inf)),
                           ("F", (0.5, 1.0, 2.0))):
            chain = [space_norm(f, SpaceParams(HerzParams(2.0, 0.25, q),
                                               0.5, 2.0, family), system)
                     for q in qs]
            ok = ok and all(a >= b for a, b in zip(chain, chain[1:]))
        if not ok:
            break
    _report(capsys, 5, ok,
            "exponent monotonicity holds verbatim on 100 fields per family")


# -- 6 ----------------------------------------------------------------------

def test_criterion_06_smoothness_lift_constant(capsys):
    system = build_fj_pair(1, 16.0, 1024, 4)
    herz = HerzParams(2.0, 0.25, 1.0)
    ok = True
    for seed in range(100):
        f = random_band_field(1, 16.0, 1024, system.band_radius(), seed=seed)
        for eps in (0.25, 1.0):
            for b1, b2 in ((1.0, 2.0), (2.0, 0.5)):
                lhs = besov_norm(f, SpaceParams(herz, 0.5, b2, "B"), system)
                rhs = besov_norm(f, SpaceParams(herz, 0.5 + eps, b1, "B"),
                                 system)
                const = (1.0 - 2.0 ** (-eps * b2)) ** (-1.0 / b2)
                ok = ok and lhs <= const * rhs
        if not ok:
            break
    _report(capsys, 6, ok,
            "level-sum lift bound holds with its closed-form constant "
            "(eps = 1/4 and 1, 100 fields)")


# -- 7 ----------------------------------------------------------------------

def _paint_f_norm(lam, params, G):
    n, L = lam.n, lam.L
    f = make_field(n, L, G)
    coords = f.axis_coords()
    env = np.zeros((G,) * n)
    for (k, m), val in lam.entries.items():
        mask = np.ones((G,) * n, dtype=bool)
        for ax in range(n):
            sel = (coords >= m[ax] * 2.0 ** -k) & (coords < (m[ax] + 1) * 2.0 ** -k)
            shape = [1] * n
            shape[ax] = G
            mask &= sel.reshape(shape)
        env[mask] += (2.0 ** (k * (params.s + n / 2.0)) * abs(val)) ** params.beta
    env = env ** (1.0 / params.beta)
    return mixed_herz_norm(f.with_values(env.astype(complex)), params.herz)


def _paint_b_norm(lam, params, G):
    n, L = lam.n, lam.L
    f = make_field(n, L, G)
    coords = f.axis_coords()
    terms = []
    for k in sorted({key[0] for key in lam.entries}):
        env = np.zeros((G,) * n)
        for (kk, m), val in lam.entries.items():
            if kk != k:
                continue
            mask = np.ones((G,) * n, dtype=bool)
            for ax in range(n):
                sel = (coords >= m[ax] * 2.0 ** -k) & (coords < (m[ax] + 1) * 2.0 ** -k)
                shape = [1] * n
                shape[ax] = G
                mask &= sel.reshape(shape)
            env[mask] = abs(val)
        terms.append(2.0 ** (k * (params.s + n / 2.0)) *
                     mixed_herz_norm(f.with_values(env.astype(complex)),
                                     params.herz))
    return lq_combine(terms, params.beta)


def _sparse_seq(n, K, count, seed):
    rng = np.random.default_rng(seed)
    entries = {}
    for _ in range(count):
        k = int(rng.integers(0, K + 1))
        m = tuple(int(rng.integers(-2 * 2 ** k, 2 * 2 ** k)) for _ in range(n))
        entries[(k, m)] = complex(rng.standard_normal(), rng.standard_normal())
    return CoeffSeq(n, K, 16.0, entries)


def test_criterion_07_sequence_norm_arithmetic(capsys):
    worst = 0.0
    bp1 = SeqSpaceParams(HerzParams(2.0, 0.25, 1.0), 0.5, 2.0, "b")
    fp1 = SeqSpaceParams(HerzParams(1.0, 0.25, 2.0), 1.75, 2.0, "f")
    for seed in range(25):
        lam = _sparse_seq(1, 3, 15, 300 + seed)
        worst = max(worst,
                    abs(b_norm(lam, bp1) / _paint_b_norm(lam, bp1, 2048) - 1.0),
                    abs(f_norm(lam, fp1) / _paint_f_norm(lam, fp1, 2048) - 1.0))
    herz2 = HerzParams((2.0, 1.0), (0.25, 0.0), (1.0, 2.0))
    bp2 = SeqSpaceParams(herz2, 0.5, 2.0, "b")
    fp2 = SeqSpaceParams(herz2, 0.5, 2.0, "f")
    for seed in range(25):
        lam = _sparse_seq(2, 2, 10, 400 + seed)
        worst = max(worst,
                    abs(b_norm(lam, bp2) / _paint_b_norm(lam, bp2, 256) - 1.0),
                    abs(f_norm(lam, fp2) / _paint_f_norm(lam, fp2, 256) - 1.0))
    _report(capsys, 7, worst <= 1e-10,
            f"sequence norms match painted-grid evaluation on 50 sparse "
            f"inputs (worst rel {worst:.2e})")


# -- 8 ----------------------------------------------------------------------

def test_criterion_08_majorant_bounds(capsys):
    par = SeqSpaceParams(HerzParams(2.0, 0.0, 2.0), 0.5, 2.0, "f")
    # a = min(1, 2, 2, 2) / 2 = 1/2, so d > n r / a = 2 n r is required
    cases = [(1, 1.0, 3.0), (1, 2.0, 5.0), (2, 1.0, 5.0)]
    lower_ok = True
    stable_ok = True
    for n, r, d in cases:
        herz = HerzParams((2.0,) * n, (0.0,) * n, (2.0,) * n)
        parn = SeqSpaceParams(herz, 0.5, 2.0, "f")
        for seed in range(10):
            lam = _sparse_seq(n, 3 if n == 1 else 2, 25 if n == 1 else 12,
                              500 + seed)
            star = lambda_star(lam, r, d, window=8)
            lower_ok = lower_ok and f_norm(lam, parn) <= f_norm(star, parn)
            if r in (1.0, math.inf):
                lower_ok = lower_ok and all(
                    abs(star.entries[key]) >= abs(val)
                    for key, val in lam.entries.items())
        ratios = []
        for window in (4, 8, 16):
            vals = []
            for seed in range(10):
                lam = _sparse_seq(n, 3 if n == 1 else 2, 25 if n == 1 else 12,
                                  600 + seed)
                vals.append(f_norm(lambda_star(lam, r, d, window), parn) /
                            f_norm(lam, parn))
            ratios.append(max(vals))
        stable_ok = stable_ok and all(
            abs(b - a) <= 0.1 * a for a, b in zip(ratios, ratios[1:]))
    del par
    _report(capsys, 8, lower_ok and stable_ok,
            "majorant dominates at constant one and its upper constant is "
            "window-stable within 10%")


# -- 9 ----------------------------------------------------------------------

def _seq(family, p, alpha, r, s, beta):
    return SeqSpaceParams(HerzParams(p, alpha, r), s=s, beta=beta,
                          family=family)


# Weight gaps are kept at 1/8 so that the broken-balance controls, whose
# probe ratio is 2^(K/4) shifted down by the gap, still clear 2^(0.2 K)
# at the smallest level K = 4.
EMBEDDING_SPECS = {
    "sobolev": (_seq("f", 1.0, 0.125, 2.0, 1.75, 2.0),
                _seq("f", 2.0, 0.0, 2.0, 1.125, 2.0)),
    "jawerth-strict": (_seq("f", 1.0, 0.125, 2.0, 1.75, 3.0),
                       _seq("b", 2.0, 0.0, 1.5, 1.125, 2.0)),
    "jawerth-equal": (_seq("f", 1.0, 0.25, 2.0, 1.75, 2.7),
                      _seq("b", 2.0, 0.25, 2.0, 1.25, 2.0)),
    "franke-strict": (_seq("b", 1.0, 0.125, 2.0, 1.75, 2.0),
                      _seq("f", 2.0, 0.0, 2.0, 1.125, 1.7)),
    "franke-equal": (_seq("b", 1.0, 0.25, 2.0, 1.75, 2.0),
                     _seq("f", 2.0, 0.25, 2.0, 1.25, 3.3)),
}


def _lowered(params, shift=0.25):
    return SeqSpaceParams(params.herz, s=params.s - shift, beta=params.beta,
                          family=params.family)


def test_criterion_09_embedding_sweep(capsys):
    t0 = time.time()
    levels = (4, 6, 8)
    ok = True
    detail = []
    for name, (source, target) in EMBEDDING_SPECS.items():
        spec = EmbeddingSpec(name, source, target)
        tops = []
        for K in levels:
            rep = seq_embedding_check(spec, K, draws=1000, seed=900)
            tops.append(rep["max_ratio"])
        slope = _fit_slope(levels, np.log2(tops))
        ok = ok and abs(slope) <= 0.05
        control = EmbeddingSpec(name, _lowered(source), target)
        assert control.defect() == 0.25
        grown = True
        for K in levels:
            rep = seq_embedding_check(control, K, draws=1000, seed=901,
                                      control=True)
            grown = grown and rep["max_ratio"] >= 2.0 ** (0.2 * K)
        ok = ok and grown
        detail.append(f"{name} slope {slope:+.3f} control {'grows' if grown else 'flat'}")
    elapsed = time.time() - t0
    _report(capsys, 9, ok and elapsed <= 300.0,
            f"embedding ratios flat for conforming specs, growing for "
            f"broken balance ({'; '.join(detail)}; {elapsed:.0f}s)")


# -- 10 ---------------------------------------------------------------------

def test_criterion_10_necessity_scaling(capsys):
    worst = 0.0
    for s2 in (1.25, 1.0, 0.75, 0.5, 0.25):
        spec = EmbeddingSpec(
            "besov-function",
            SpaceParams(HerzParams(1.0, 0.25, 2.0), s=s2, beta=2.0, family="B"),
            SpaceParams(HerzParams(2.0, 0.0, 2.0), s=0.0, beta=2.0, family="B"))
        rep = necessity_fit(spec, 1, 8.0, 256, 4, seed=77)
        assert math.isclose(rep["c_expected"], 0.75 - s2, abs_tol=1e-12)
        worst = max(worst, abs(rep["c_fit"] - rep["c_expected"]))
    _report(capsys, 10, worst <= 0.05,
            f"necessity exponent recovered across c in [-1/2, 1/2] "
            f"(worst err {worst:.2e})")


# -- 11 ---------------------------------------------------------------------

def test_criterion_11_band_transfer_sharpness(capsys):
    configs = [
        (HerzParams(1.0, 0.0, 2.0), HerzParams(2.0, 0.0, 2.0), 1),
        (HerzParams(2.0, 0.25, 1.5), HerzParams(4.0, 0.0, 2.0), 1),
        (HerzParams((1.0, 2.0), (0.25, 0.25), (2.0, 1.0)),
         HerzParams((2.0, 4.0), (0.0, 0.0), (2.0, 1.0)), 2),
    ]
    worst = 0.0
    for source, target, n in configs:
        rep = ppn_check(source, target, n, 8.0, 256, 4, seed=55)
        worst = max(worst, abs(rep["slope"]))
    _report(capsys, 11, worst <= 0.05,
            f"band-transfer exponent sharp in three configurations "
            f"(worst slope {worst:.2e})")


# -- 12 ---------------------------------------------------------------------

def test_criterion_12_discrete_hardy(capsys):
    ok = True
    for a in (0.25, 0.5, 0.75):
        for q in (0.5, 1.0, 2.0, math.inf):
            rep = hardy_check(a, q, draws=100, length=48, seed=5)
            ok = ok and rep["worst_ratio"] <= rep["bound"]
    _report(capsys, 12, ok,
            "one-sided smoothing sums stay below the closed-form constant "
            "for all 12 (a, q) pairs")


# -- 13 ---------------------------------------------------------------------

def test_criterion_13_vector_maximal(capsys):
    herz = HerzParams(2.0, 0.25, 2.0)
    ratios = []
    for G in (256, 512, 1024):
        rep = fs_vector_check(bump_family(1, 16.0, G, 16, seed=11),
                              herz, beta=2.0, t=0.5)
        ratios.append(rep["ratio"])
    slope = _fit_slope(np.log2([256, 512, 1024]), np.log2(ratios))
    _report(capsys, 13, abs(slope) <= 0.05,
            f"vector maximal ratio grid-stable over G = 256..1024 "
            f"(slope {slope:+.2e})")


# -- 14 ---------------------------------------------------------------------

DETERMINISM_CONFIGS = {
    "embed-sweep": """
[run]
theorem = sobolev
[source]
family = f
s = 1.75
beta = 2
p = 1
alpha = 0.25
q = 2
[target]
family = f
s = 1.0
beta = 2
p = 2
alpha = 0
q = 2
[ensemble]
seed = 31
draws = 50
k_list = 4,6
""",
    "necessity": """
[run]
theorem = besov-function
[grid]
n = 1
l = 8
g = 256
[source]
family = B
s = 1.25
beta = 2
p = 1
alpha = 0.25
q = 2
[target]
family = B
s = 0
beta = 2
p = 2
alpha = 0
q = 2
[ensemble]
seed = 17
n_max = 4
""",
    "hardy-check": """
[hardy]
a = 0.25,0.5,0.75
q = 0.5,1,2,inf
[ensemble]
seed = 5
draws = 60
length = 48
""",
}


def test_criterion_14_deterministic_reports(capsys, tmp_path):
    ok = True
    for command, text in DETERMINISM_CONFIGS.items():
        path = tmp_path / f"{command}.ini"
        path.write_text(text)
        outputs = []
        for _ in range(2):
            cfg = ExperimentConfig.load(str(path), command)
            for fmt in ("csv", "json"):
                outputs.append((fmt, render_report(run_config(cfg), fmt)))
        first, second = outputs[:2], outputs[2:]
        ok = ok and first == second
    _report(capsys, 14, ok,
            "ensemble reports are byte-identical on re-run with the same seed")
