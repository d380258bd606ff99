"""Compare the compiled kernels with the pure-Python fallback.

Times the Hermitian Jacobi eigensolver, the pivoted LU solve and one full
thm1-plus trial (all norms) under each backend that can be imported.

    python benchmarks/bench_backends.py --sizes 4 8 16 --repeat 5
"""
import argparse
import json
import timeit

import numpy as np

from uinorm import _backend
from uinorm.inequalities import run_trial
from uinorm.sampling import SamplerConfig


def _hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g + g.conj().T


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench(sizes, repeat, number, trial_dims):
    rng = np.random.default_rng(0)
    rows = []
    mods = _backend.available()
    for n in sizes:
        h = _hermitian(rng, n)
        a = h + n * np.eye(n)
        b = np.eye(n, dtype=np.complex128)
        for name, mod in sorted(mods.items()):
            rows.append(dict(kernel="jacobi_eigh", n=n, backend=name,
                             seconds=_best(lambda: mod.jacobi_eigh(h), repeat, number)))
            rows.append(dict(kernel="lu_solve", n=n, backend=name,
                             seconds=_best(lambda: mod.lu_solve(a, b, 1e-14), repeat, number)))
    saved = _backend.jacobi_eigh, _backend.lu_solve
    try:
        for n in trial_dims:
            cfg = SamplerConfig(1, n)
            for name, mod in sorted(mods.items()):
                # linalg looks the kernels up on _backend at call time
                _backend.jacobi_eigh, _backend.lu_solve = mod.jacobi_eigh, mod.lu_solve
                rows.append(dict(kernel="thm1-plus trial", n=n, backend=name,
                                 seconds=_best(lambda: run_trial("thm1-plus", cfg, 0), repeat, max(1, number // 4))))
    finally:
        _backend.jacobi_eigh, _backend.lu_solve = saved
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[2, 4, 8, 16])
    p.add_argument("--trial-dims", type=int, nargs="+", default=[2, 8])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--number", type=int, default=20)
    p.add_argument("--json", action="store_true", help="print raw rows as JSON")
    args = p.parse_args(argv)

    rows = bench(args.sizes, args.repeat, args.number, args.trial_dims)
    if args.json:
        print(json.dumps(rows, indent=1))
        return
    table = {}
    for r in rows:
        table.setdefault((r["kernel"], r["n"]), {})[r["backend"]] = r["seconds"]
    print(f"{'kernel':<18}{'n':>4}{'python [us]':>14}{'cython [us]':>14}{'speedup':>9}")
    for (kernel, n), t in table.items():
        py, cy = t.get("python"), t.get("cython")
        cy_txt = f"{cy * 1e6:14.1f}" if cy else f"{'-':>14}"
        sp = f"{py / cy:9.1f}" if cy else f"{'-':>9}"
        print(f"{kernel:<18}{n:>4}{py * 1e6:14.1f}{cy_txt}{sp}")


if __name__ == "__main__":
    main()
