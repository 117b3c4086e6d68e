"""Time the compiled core against the numpy fallback on the hot kernels.

Usage::

    python3 benchmarks/bench_backends.py [--sizes 50 100 200] [--repeat 3]

Both backends are driven through the public API; the fallback is swapped in
by rebinding the dispatch table in ``sparsebounds._backend``.
"""
import argparse
import contextlib
import timeit

import numpy as np

from sparsebounds import _backend, _fallback
from sparsebounds.kernels import KernelSpec, gram
from sparsebounds.linalg import cholesky, jacobi_eigen

FUNCS = ("cross_dot", "cross_sqdist", "sym_dot", "sym_sqdist", "cholesky", "cho_solve", "jacobi")


@contextlib.contextmanager
def use_backend(name):
    saved = {f: getattr(_backend, f) for f in FUNCS}
    if name == "python":
        for f in FUNCS:
            setattr(_backend, f, getattr(_fallback, f))
    try:
        yield
    finally:
        for f, fn in saved.items():
            setattr(_backend, f, fn)


def cases(n, rng):
    X = rng.standard_normal((n, 3))
    K = gram(KernelSpec.gaussian(1.0), X)
    A = K + n * 1e-3 * np.eye(n)
    return {
        "gram": lambda: gram(KernelSpec.gaussian(1.0), X),
        "cholesky": lambda: cholesky(A),
        "jacobi": lambda: jacobi_eigen(K),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(0)
    backends = ["python"] if _backend.NAME == "python" else ["compiled", "python"]
    if len(backends) == 1:
        print("compiled core not built; timing the fallback only")
    print(f"{'op':<10}{'n':>6}" + "".join(f"{b + ' [ms]':>16}" for b in backends) + f"{'speedup':>10}")
    for n in args.sizes:
        for op, fn in cases(n, rng).items():
            times = []
            for b in backends:
                with use_backend(b):
                    times.append(min(timeit.repeat(fn, number=1, repeat=args.repeat)) * 1e3)
            speedup = f"{times[1] / times[0]:>9.1f}x" if len(times) == 2 else ""
            print(f"{op:<10}{n:>6}" + "".join(f"{t:>16.2f}" for t in times) + speedup)


if __name__ == "__main__":
    main()
