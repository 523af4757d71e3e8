"""Benchmark the compiled permutation-table kernels against the pure backend.

Runs the four table builders (perm_table, lehmer_codes, rank_perms,
build_tau_tables) on both backends, checks the outputs are bit-identical,
and prints best-of-R wall times with the speedup.

    python3 benchmarks/bench_kernels.py --n 8 9 10 --repeat 3
"""

import argparse
import time

import numpy as np

from atchain._kernels import _pykern

try:
    from atchain._kernels import _ckern
except ImportError:
    _ckern = None


def best_of(fn, repeat: int) -> tuple[float, object]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_n(n: int, repeat: int) -> None:
    perms = _pykern.perm_table(n)
    cases = [
        ("perm_table", lambda impl: impl.perm_table(n)),
        ("lehmer_codes", lambda impl: impl.lehmer_codes(perms)),
        ("rank_perms", lambda impl: impl.rank_perms(perms)),
        ("build_tau_tables", lambda impl: impl.build_tau_tables(perms)),
    ]
    print(f"n = {n}  ({len(perms)} states)")
    for name, call in cases:
        t_py, out_py = best_of(lambda: call(_pykern), repeat)
        if _ckern is None:
            print(f"  {name:<18} python {t_py * 1e3:9.2f} ms   (no extension built)")
            continue
        t_c, out_c = best_of(lambda: call(_ckern), repeat)
        if not np.array_equal(out_py, out_c):
            raise SystemExit(f"backend outputs differ for {name} at n = {n}")
        print(
            f"  {name:<18} python {t_py * 1e3:9.2f} ms   "
            f"compiled {t_c * 1e3:9.2f} ms   x{t_py / t_c:6.1f}"
        )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[8, 9, 10])
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = parser.parse_args()
    for n in args.n:
        bench_n(n, args.repeat)


if __name__ == "__main__":
    main()
