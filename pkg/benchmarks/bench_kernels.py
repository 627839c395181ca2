"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--order 24] [--grid 512]
"""

import argparse
import timeit

import numpy as np

from osculant._backend import kernels
from osculant._pykernels import ms_segments as _py_ms


def _cases(order, grid):
    rng = np.random.default_rng(0)
    a = rng.standard_normal(order + 1)
    b = rng.standard_normal(order + 1)
    b[0] = 2.0
    pos = a.copy()
    pos[0] = 3.0
    xs = np.linspace(-1.5, 1.5, grid + 1)
    X, Y = np.meshgrid(xs, xs)
    field = X ** 4 + Y ** 4 - X * Y - 0.5
    return {
        "series_mul": (a, b),
        "series_div": (a, b),
        "series_exp": (a,),
        "series_log": (pos,),
        "series_sincos": (a,),
        "series_sqrt": (pos,),
        "ms_segments": (field,),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--order", type=int, default=24)
    ap.add_argument("--grid", type=int, default=512)
    args = ap.parse_args(argv)

    py = kernels("python")
    try:
        cy = kernels("cython")
    except ImportError:
        cy = None
        print("compiled extension not built; timing the fallback only")

    print(f"{'kernel':<14}{'python [us]':>14}{'cython [us]':>14}{'speedup':>10}")
    for name, inputs in _cases(args.order, args.grid).items():
        number = 3 if name == "ms_segments" else 2000
        row = []
        for mod in (py, cy):
            if mod is None:
                row.append(float("nan"))
                continue
            fn = getattr(mod, name)
            t = min(timeit.repeat(lambda: fn(*inputs), number=number, repeat=args.repeat))
            row.append(1e6 * t / number)
        print(f"{name:<14}{row[0]:>14.2f}{row[1]:>14.2f}{row[0] / row[1]:>10.1f}")
    if cy is not None:
        # agreement check on the contour field
        f = _cases(args.order, args.grid)["ms_segments"][0]
        same = sorted(map(tuple, np.sort(_py_ms(f), axis=1))) == sorted(map(tuple, np.sort(cy.ms_segments(f), axis=1)))
        print(f"ms_segments backends agree: {same}")


if __name__ == "__main__":
    main()
