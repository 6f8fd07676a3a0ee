"""Time the PY and NB builds of the float kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Reports the best wall time for single right-hand side calls and for a short
DOPRI5 integration of each system. The NB rows are skipped when numba is missing.
"""
import argparse
import time

import numpy as np

from sasano_mpd import _accel, _kernels
from sasano_mpd.sasano import S_CHART, PhasePoint, kernel_params, random_alpha
from sasano_mpd.schlesinger import SpectralData, random_instance


def best_of(fn, repeat):
    fn()  # warm up (and compile, for NB)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.Generator(np.random.PCG64(1))
    al = random_alpha(3, rng, exact=False)
    x = PhasePoint(S_CHART, rng.uniform(-1, 1, 3).astype(complex),
                   rng.uniform(-1, 1, 3).astype(complex), 1.6)
    sas = (_kernels.SASANO, 1.6, x.as_array(), kernel_params(al, S_CHART), _kernels.S_CHART_CODE)
    F = random_instance(SpectralData(3, 0.2, -0.3, 0.1), 3, t=0.3)
    sch = (_kernels.SCHLESINGER, 0.3, F.flat(), np.zeros(1, dtype=complex), 6)
    return {"sasano n=3": (sas, np.linspace(1.6, 1.7, 5)),
            "schlesinger n=3": (sch, np.linspace(0.3, 0.4, 5))}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    builds = [("PY", _kernels.PY)]
    if _accel.NUMBA_AVAILABLE:
        builds.append(("NB", _kernels.NB))

    print(f"{'case':<28}{'build':>6}{'seconds':>14}")
    for name, ((code, t0, y0, par, aux), times) in cases().items():
        for label, k in builds:
            rhs = best_of(lambda: k.rhs(code, t0, y0, par, aux), args.repeat)
            print(f"{name + ' rhs':<28}{label:>6}{rhs:>14.3e}")
        for label, k in builds:
            run = best_of(lambda: k.dopri5(code, t0, y0, times, par, aux, 1e-10, 1e-12, 100000),
                          args.repeat)
            print(f"{name + ' dopri5':<28}{label:>6}{run:>14.3e}")


if __name__ == "__main__":
    main()
