"""Time the hot kernels on the numba path against the numpy fallback.

The path is chosen at import time from ``HERZLAB_NO_NUMBA``, so the two
paths cannot live in one process.  Run without arguments to benchmark
both in subprocesses and print a comparison:

    python3 benchmarks/bench_kernels.py

Pass ``--path numpy`` or ``--path numba`` to time a single path in the
current process (the numba path still requires the env flag unset).
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _workloads(seed=5):
    rng = np.random.default_rng(seed)
    rows = np.abs(rng.standard_normal((64, 8192)))
    widths = np.arange(8192, dtype=np.int64)[1::64]
    H, M = 1000, 40000
    pos = rng.integers(-64, 64, size=(H, 2)).astype(np.int64)
    targets = rng.integers(-128, 128, size=(M, 2)).astype(np.int64)
    mag = np.abs(rng.standard_normal(H))
    return {
        "maximal_rows": (rows, widths),
        "lambda_star_sum": (mag, pos, targets, 5.0),
        "lambda_star_max": (mag, pos, targets, 5.0),
    }


def _time_kernels(repeat):
    from herzlab import _accel

    results = {"path": "numba" if _accel.USE_NUMBA else "numpy"}
    for name, args in _workloads().items():
        fn = getattr(_accel, name)
        out = fn(*args)  # warm-up, also compiles on the numba path
        best = min(
            _timed(fn, args) for _ in range(repeat)
        )
        results[name] = {"seconds": best, "checksum": float(np.sum(out))}
    return results


def _timed(fn, args):
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def _run_subprocess(path, repeat):
    env = dict(os.environ)
    env["HERZLAB_NO_NUMBA"] = "1" if path == "numpy" else "0"
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__),
         "--path", path, "--repeat", str(repeat), "--json"],
        capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout.splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--path", choices=("numba", "numpy"))
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    if args.path is not None:
        res = _time_kernels(args.repeat)
        if res["path"] != args.path:
            raise SystemExit(f"requested {args.path} but got {res['path']}; "
                             f"check HERZLAB_NO_NUMBA")
        if args.json:
            print(json.dumps(res))
        else:
            for name, cell in res.items():
                if name != "path":
                    print(f"{res['path']:5s} {name:16s} {cell['seconds']:.4f}s")
        return 0

    fast = _run_subprocess("numba", args.repeat)
    slow = _run_subprocess("numpy", args.repeat)
    print(f"{'kernel':16s} {'numba':>9s} {'numpy':>9s} {'speedup':>8s}")
    for name in ("maximal_rows", "lambda_star_sum", "lambda_star_max"):
        tf, ts = fast[name]["seconds"], slow[name]["seconds"]
        print(f"{name:16s} {tf:8.4f}s {ts:8.4f}s {ts / tf:7.1f}x")
        cf, cs = fast[name]["checksum"], slow[name]["checksum"]
        if not np.isclose(cf, cs, rtol=1e-12):
            print(f"  checksum mismatch: {cf!r} vs {cs!r}")
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
