"""Compare the compiled and pure-Python inner-integral kernels.

    python benchmarks/bench_kernels.py [--terms 12800] [--repeat 5] [--threads 1]

Reports the best-of-N wall time per backend for one batch of Matsubara
terms, the speed-up, and the largest relative difference between backends.
"""
import argparse
import os
import time

import numpy as np

from lifshitz_cp import _kernels_py, kernels
from lifshitz_cp.lifshitz import EvaluationPoint, _response
from lifshitz_cp.materials import FIXTURES, load_wall


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--terms", type=int, default=12800)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--materials", default="sio2,gold_drude,gold_screened")
    args = p.parse_args()
    os.environ["LIFSHITZ_CP_THREADS"] = str(args.threads)
    try:
        from lifshitz_cp import _kernels
    except ImportError:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")

    a = 1e-4
    tau = 64.0 / args.terms
    T = tau * EvaluationPoint(a, 1.0).T_eff / (2 * np.pi)
    zeta = tau * np.arange(1, args.terms + 1)
    print(f"{args.terms} terms, level {args.level}, threads {args.threads}, T = {T:.4g} K")
    print(f"{'material':>26} {'cython [s]':>11} {'python [s]':>11} {'speed-up':>9} {'max rel diff':>13}")
    for name in args.materials.split(","):
        if name not in FIXTURES:
            raise SystemExit(f"unknown fixture {name!r}")
        resp = _response(load_wall(name), zeta, a, T)
        layout = kernels.make_layout(zeta, resp.scale)
        call = lambda be: kernels.inner_integrals(zeta, resp.em1, resp.dterm, layout, args.level,
                                                  resp.mode, resp.kappa2, resp.eps0, backend=be)
        t_c, j_c = _best(lambda: call(_kernels), args.repeat)
        t_p, j_p = _best(lambda: call(_kernels_py), args.repeat)
        diff = np.max(np.abs(j_c - j_p) / np.abs(j_p))
        print(f"{name:>26} {t_c:11.4f} {t_p:11.4f} {t_p / t_c:9.1f} {diff:13.2e}")


if __name__ == "__main__":
    main()
