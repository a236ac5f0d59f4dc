"""Time the compiled kernels against their pure-numpy fallbacks.

Run from the repository root:

    python benchmarks/bench_kernels.py [--n 200000] [--chars 12] [--repeat 5]

The same draws are fed to both flavors and the results are checked to agree
before any number is printed, so a speedup line is also a correctness line.
Set SOLADIC_DISABLE_JIT=1 to confirm the numpy path is what the package
falls back to when compilation is off; the benchmark itself always times
whichever flavors are importable.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from soladic._kernels import ACTIVE_PATH, implementations


def _time(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=200_000, help="draws per sample")
    parser.add_argument("--chars", type=int, default=12, help="character panel size")
    parser.add_argument("--repeat", type=int, default=5, help="timed repetitions (best is kept)")
    args = parser.parse_args()

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(0)))
    coords = rng.random(args.n)
    other = rng.random(args.n)
    multipliers = np.ascontiguousarray(2.0 ** np.arange(args.chars))

    flavors = implementations()
    print(f"dispatch path in this process: {ACTIVE_PATH}")
    print(f"n={args.n}, characters={args.chars}, repeat={args.repeat} (best time shown)\n")

    reference = {
        "cf_sums": flavors["numpy"][0](coords, multipliers),
        "kuiper": flavors["numpy"][1](coords, other),
    }
    rows = []
    for name, (cf_fn, kuiper_fn) in flavors.items():
        got_cf = cf_fn(coords, multipliers)
        got_k = kuiper_fn(coords, other)
        np.testing.assert_allclose(got_cf, reference["cf_sums"], rtol=0, atol=1e-9)
        np.testing.assert_allclose(got_k, reference["kuiper"], rtol=0, atol=1e-12)
        rows.append(
            (
                name,
                _time(cf_fn, coords, multipliers, repeat=args.repeat),
                _time(kuiper_fn, coords, other, repeat=args.repeat),
            )
        )

    base = {name: (t_cf, t_k) for name, t_cf, t_k in rows}["numpy"]
    print(f"{'path':<8} {'cf_sums':>12} {'kuiper':>12} {'cf speedup':>12} {'kuiper speedup':>15}")
    for name, t_cf, t_k in rows:
        print(
            f"{name:<8} {t_cf * 1e3:>10.2f}ms {t_k * 1e3:>10.2f}ms"
            f" {base[0] / t_cf:>11.2f}x {base[1] / t_k:>14.2f}x"
        )
    if "jit" not in flavors:
        print("\n(compiled flavor unavailable in this process; numpy fallback only)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
