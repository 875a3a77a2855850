"""Time the compiled kernels against the numpy reference implementations.

    python3 benchmarks/bench_kernels.py [--repeat 7] [--size 20000]

Prints one row per kernel with the best wall time of each backend, the
speed-up and the largest difference between the two outputs, relative
where the value exceeds one in magnitude.
"""
import argparse
import sys
import timeit

import numpy as np

from groovekit._integrands import f_coefficients
from groovekit._kernels import compiled_backend, python_backend


def cases(size):
    u = np.linspace(0.0, 12.0, size)
    nu = np.linspace(-40.0, 40.0, size)
    w = np.linspace(1e-3, 6.0, size)
    policy = (1e-16, 1e-300, 4000, 3)
    coeffs = np.array(f_coefficients(2), dtype=float)
    return {
        "quartic_series z1 order 2": lambda k: k.quartic_series(-0.25, 0.25, 0.5, 0.75, 0, 2, u, *policy)[0],
        "pfq_series 1F3": lambda k: k.pfq_series(np.array([0.25]), np.array([0.75, 1.25, 1.5]), nu, *policy)[0],
        "dawson": lambda k: k.dawson(w * 4.0),
        "ibp_y1 k=2": lambda k: k.ibp_y1(2, coeffs, w),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--size", type=int, default=20000)
    args = ap.parse_args(argv)
    if compiled_backend is None:
        print("compiled kernels are not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    print(f"{'kernel':28s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speed-up':>9s} {'max diff':>11s}")
    for name, run in cases(args.size).items():
        slow = min(timeit.repeat(lambda: run(python_backend), number=1, repeat=args.repeat))
        fast = min(timeit.repeat(lambda: run(compiled_backend), number=1, repeat=args.repeat))
        ref = run(python_backend)
        diff = float(np.max(np.abs(ref - run(compiled_backend)) / np.maximum(np.abs(ref), 1.0)))
        print(f"{name:28s} {1e3 * slow:12.3f} {1e3 * fast:12.3f} {slow / fast:9.1f} {diff:11.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
