"""Time the compiled and pure-Python RK4 frame integrators on the same input.

    python benchmarks/bench_kernels.py [--steps 4000] [--repeat 5]
"""
import argparse
import time

import numpy as np

from lorentz_helix import _backend
from lorentz_helix.synthesis import CurvatureSpec


def best_time(kernels, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = kernels.integrate_frame(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=4000)
    parser.add_argument("--repeat", type=int, default=5)
    opts = parser.parse_args()

    h = 2.0 / opts.steps
    spec = CurvatureSpec("1+0.5*sin(s)", "1+0.3*s", "0.5+cos(s)", 0.0, 2.0, h)
    x0 = np.zeros((5, 4))
    x0[1:] = np.eye(4)
    args = (*spec.sample(spec.half_grid()), h, x0, 16, 1e-10)

    t_py, out_py = best_time(_backend.load("python"), args, opts.repeat)
    print(f"python  {opts.steps} steps: {t_py * 1e3:9.2f} ms")
    try:
        compiled = _backend.load("cython")
    except ImportError:
        print("cython  extension not built; run `pip install -e . --no-build-isolation`")
        return
    t_cy, out_cy = best_time(compiled, args, opts.repeat)
    print(f"cython  {opts.steps} steps: {t_cy * 1e3:9.2f} ms")
    print(f"speedup {t_py / t_cy:.1f}x, max |difference| {np.max(np.abs(out_py - out_cy)):.2e}")


if __name__ == "__main__":
    main()
