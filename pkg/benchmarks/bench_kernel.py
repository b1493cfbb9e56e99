"""Compare the compiled and numpy critical-point kernels on registered orbits.

    python3 benchmarks/bench_kernel.py [--starts 400] [--repeat 3]

Both kernels receive identical starting points; the script reports wall time
per backend and the largest disagreement in converged points.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from taut import _search_py
from taut.models import get_model
from taut.morse import _random_starts

try:
    from taut import _core
except ImportError:
    _core = None

CASES = [
    ("so3-r3r3", "e1; e2"),
    ("spin7-r8r8", "1; i"),
    ("g2-r7r7r7", "i; j; e"),
    ("spin9-r16r16", "(1,0); (e,1)"),
    ("f4-r26r26", "e2; e3"),
]


def _time(fn, repeat):
    best, out = np.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--starts", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    print(f"{'model':16s} {'d':>4s} {'dim G':>6s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s} {'max |dx|':>10s}")
    for name, lit in CASES:
        model = get_model(name)
        rep = model.rep
        p = model.point(lit)
        q = np.random.default_rng(0).normal(size=rep.d)
        x0 = _random_starts(rep, p, args.starts, seed=0)
        tp, (xp, _, _) = _time(lambda: _search_py.solve_starts(rep.basis, q, x0), args.repeat)
        if _core is None:
            print(f"{name:16s} {rep.d:4d} {rep.group_dim:6d} {tp:10.3f} {'n/a':>10s}")
            continue
        tc, (xc, _, _) = _time(lambda: _core.solve_starts(rep.basis, q, x0), args.repeat)
        diff = float(np.abs(xp - xc).max())
        print(f"{name:16s} {rep.d:4d} {rep.group_dim:6d} {tp:10.3f} {tc:10.3f} {tp / tc:8.1f} {diff:10.1e}")
    if _core is None:
        print("compiled extension not built; only the numpy kernel was timed")


if __name__ == "__main__":
    main()
