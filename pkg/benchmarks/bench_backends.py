"""Compare the compiled ascent core against the pure-numpy fallback.

Runs the full numeric optimizer on the same random state pairs with the
extension enabled and disabled, reports wall time per solve and the worst
value disagreement. Usage:

    python3 benchmarks/bench_backends.py [--dims 2 3 4 5] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

from qdiv import compiled_available
from qdiv.channels import random_density
from qdiv.divergences import OptimizerOptions, optimized_f_divergence
from qdiv.fkernel import neg_log, renyi_f


def time_solves(dim: int, repeats: int, force_pure: bool) -> tuple[float, list[float]]:
    opts = OptimizerOptions(multistarts=2, force_pure=force_pure)
    kernels = [neg_log(), renyi_f(0.75), renyi_f(2.0)]
    values = []
    t0 = time.perf_counter()
    for r in range(repeats):
        X = random_density(dim, seed=9000 + 2 * r)
        Y = random_density(dim, seed=9001 + 2 * r)
        for f in kernels:
            values.append(optimized_f_divergence(X, Y, f, opts).value.value)
    per_solve = (time.perf_counter() - t0) / (repeats * len(kernels))
    return per_solve, values


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    if not compiled_available():
        print("compiled extension not available; timing the pure backend only")

    print(f"{'dim':>4} {'pure (ms)':>10} {'compiled (ms)':>14} {'speedup':>8} {'max |dv|':>10}")
    for d in args.dims:
        t_pure, v_pure = time_solves(d, args.repeats, force_pure=True)
        if compiled_available():
            t_fast, v_fast = time_solves(d, args.repeats, force_pure=False)
            dv = max(abs(a - b) for a, b in zip(v_pure, v_fast))
            print(f"{d:>4} {t_pure * 1e3:>10.2f} {t_fast * 1e3:>14.2f} "
                  f"{t_pure / t_fast:>7.2f}x {dv:>10.2e}")
        else:
            print(f"{d:>4} {t_pure * 1e3:>10.2f} {'-':>14} {'-':>8} {'-':>10}")


if __name__ == "__main__":
    main()
