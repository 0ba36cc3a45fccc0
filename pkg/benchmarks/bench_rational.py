"""Compare the gmpy2 rational backend against pure-Python fractions.

Runs the same exact locus computation under both backends and reports wall
times.  The backend is chosen at import time from ELLOP_PURE_RATIONAL, so
the fractions run happens in a subprocess.

Usage: python benchmarks/bench_rational.py [--q 8] [--r 5] [--repeat 3]
"""

import argparse
import os
import subprocess
import sys
import time

WORKLOAD = """
import time
from ellop.rationals import BACKEND
from ellop.locus3 import constraints_for, triangular_solve

t0 = time.perf_counter()
for _ in range({repeat}):
    branches = triangular_solve(constraints_for({q}, {r}))
dt = (time.perf_counter() - t0) / {repeat}
print(f"{{BACKEND}} {{dt:.4f}}")
"""


def run(q, r, repeat, pure):
    env = dict(os.environ)
    if pure:
        env["ELLOP_PURE_RATIONAL"] = "1"
    else:
        env.pop("ELLOP_PURE_RATIONAL", None)
    code = WORKLOAD.format(q=q, r=r, repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    backend, dt = out.stdout.split()
    return backend, float(dt)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, default=8)
    ap.add_argument("--r", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"locus solve at gaps ({args.q}, {args.r}), "
          f"average of {args.repeat} runs")
    results = {}
    for pure in (False, True):
        backend, dt = run(args.q, args.r, args.repeat, pure)
        results[backend] = dt
        print(f"  {backend:10s} {dt:8.4f} s")
    if "gmpy2" in results and "fractions" in results:
        print(f"  speedup    {results['fractions'] / results['gmpy2']:8.2f}x")


if __name__ == "__main__":
    main()
