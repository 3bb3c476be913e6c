"""Compare the compiled and pure-Python quadrature kernels.

Usage::

    python benchmarks/bench_kernels.py [--repeat N]

Each kernel is timed with both backends on the same arguments and the
results are checked for agreement before timings are printed.
"""
import argparse
import math
import os
import subprocess
import sys
import timeit

from aicontrast import _kernels_py
from aicontrast.config import load

try:
    from aicontrast import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _cases():
    seq = load(scenario="normal").sequence()
    ks = [0.5 / s**2 for s in seq.ratios]
    return {
        "single pulse, s=1.17": (
            "simpson_single", (math.pi, ks[2], 8.0, 1e-9, 2000)),
        "three pulse, phi3=0": (
            "simpson_three", (seq.areas, ks, (0.0, 0.0, 0.0), 8.0, 1e-9, 2000)),
        "three pulse, phi3=pi": (
            "simpson_three", (seq.areas, ks, (0.0, 0.0, math.pi), 8.0, 1e-9, 2000)),
    }


def _time(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05:
        number *= 4
    best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat))
    return best / number


def _plan_time(pure):
    env = dict(os.environ, AICONTRAST_PURE_PYTHON="1" if pure else "0")
    code = ("import time; from aicontrast.compensation import build_plan; "
            "from aicontrast.config import load; s = load(scenario='normal').sequence(); "
            "t = time.perf_counter(); build_plan(s); print(time.perf_counter() - t)")
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-plan", action="store_true",
                        help="skip the end-to-end compensation plan timing")
    args = parser.parse_args(argv)

    if _kernels_c is None:
        print("compiled extension not built; nothing to compare")
        return 1

    print(f"{'kernel':<24}{'python [ms]':>14}{'cython [ms]':>14}{'speedup':>10}")
    for label, (name, call) in _cases().items():
        py_fn, c_fn = getattr(_kernels_py, name), getattr(_kernels_c, name)
        v_py, v_c = py_fn(*call)[0], c_fn(*call)[0]
        if not math.isclose(v_py, v_c, rel_tol=0, abs_tol=1e-12):
            raise SystemExit(f"backends disagree on {label}: {v_py!r} vs {v_c!r}")
        t_py, t_c = _time(py_fn, call, args.repeat), _time(c_fn, call, args.repeat)
        print(f"{label:<24}{1e3 * t_py:>14.3f}{1e3 * t_c:>14.3f}{t_py / t_c:>9.1f}x")

    if not args.skip_plan:
        t_py, t_c = _plan_time(True), _plan_time(False)
        print(f"{'plan (normal preset)':<24}{1e3 * t_py:>14.1f}{1e3 * t_c:>14.1f}{t_py / t_c:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
