"""Compare the compiled and numpy backends on the Lebesgue-function hot loop.

Usage: python benchmarks/bench_core.py [--repeat R] [--threads T]
"""
import argparse
import time

import numpy as np

from hyperball import _core
from hyperball.cubature import ball_rule
from hyperball.domains import BallWeight
from hyperball.hyperinterp import build, default_grid, lebesgue_function

CASES = [(2, 1, 8), (2, 1, 16), (2, 3, 16), (3, 1, 8)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--points", type=int, default=2000, help="evaluation points per case")
    args = ap.parse_args()

    if "cython" not in _core.AVAILABLE:
        print("compiled extension not built; only the numpy backend is available")
    print(f"{'case':<18}{'nodes':>7}{'points':>8}" + "".join(f"{b:>12}" for b in _core.AVAILABLE)
          + f"{'speedup':>10}{'max rel.diff':>14}")
    for d, m, n in CASES:
        w = BallWeight(d, m)
        op = build(w, n, ball_rule(w, 2 * n))
        pts, _ = default_grid("ball", d, n, None, grid_scale=4, floor=16).points()
        pts = pts[: args.points]
        timings, outs = [], []
        for backend in _core.AVAILABLE:
            t, out = best_of(lambda: lebesgue_function(op, pts, threads=args.threads, backend=backend),
                             args.repeat)
            timings.append(t)
            outs.append(out)
        speed = timings[-1] / timings[0] if len(timings) > 1 else 1.0
        diff = max(float(np.max(np.abs(o - outs[0]) / np.abs(outs[0]))) for o in outs)
        label = f"d={d} m={m} n={n}"
        print(f"{label:<18}{len(op.rule):>7}{len(pts):>8}" + "".join(f"{t:>11.3f}s" for t in timings)
              + f"{speed:>9.1f}x{diff:>14.1e}")


if __name__ == "__main__":
    main()
