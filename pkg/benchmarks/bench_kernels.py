"""Timing comparison of the compiled kernels against the pure-Python fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py            # standard suite
    python3 benchmarks/bench_kernels.py --large    # adds a 27-site exhaustive solve

Both backends compute identical values (asserted here); only speed differs.
"""

import argparse
import random
import time

from ea_bounds import make_cell, make_lattice
from ea_bounds._kernels import _core, _pure


def best_of(fn, repeat):
    best = float("inf")
    value = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def bench_case(name, core_fn, pure_fn, repeat):
    t_pure, v_pure = best_of(pure_fn, repeat)
    if _core is None:
        print(f"{name:<44} pure {t_pure * 1e3:9.2f} ms   (no extension)")
        return
    t_core, v_core = best_of(core_fn, repeat)
    assert v_core == v_pure, f"{name}: backends disagree"
    ratio = t_pure / t_core if t_core > 0 else float("inf")
    print(
        f"{name:<44} compiled {t_core * 1e3:9.2f} ms   "
        f"pure {t_pure * 1e3:9.2f} ms   speedup {ratio:6.1f}x"
    )


def norm(pair):
    e, m = pair
    return int(e), int(m)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--large", action="store_true",
                    help="include the 27-site exhaustive case (compiled only)")
    args = ap.parse_args()

    cube = make_cell(3)
    table_core = _core.antialign_table(8, list(cube.bonds)) if _core else None
    table_pure = _pure.antialign_table(8, list(cube.bonds))

    bench_case(
        "cube +-J sweep (4096 sign patterns)",
        lambda: tuple(map(int, _core.pm_minima(table_core, 12)[0])),
        lambda: tuple(_pure.pm_minima(table_pure, 12)[0]),
        args.repeat,
    )

    rng = random.Random(1)
    j8h = [[rng.choice((-1, 1)) for _ in range(8)] for _ in range(8)]
    j8v = [[rng.choice((-1, 1)) for _ in range(8)] for _ in range(8)]
    bench_case(
        "row DP, 8x8 periodic",
        lambda: norm(_core.dp2d_ground(8, 8, j8h, j8v, True)),
        lambda: norm(_pure.dp2d_ground(8, 8, j8h, j8v, True)),
        args.repeat,
    )

    j10h = [[rng.choice((-1, 1)) for _ in range(10)] for _ in range(10)]
    j10v = [[rng.choice((-1, 1)) for _ in range(10)] for _ in range(10)]
    bench_case(
        "row DP, 10x10 free",
        lambda: norm(_core.dp2d_ground(10, 10, j10h, j10v, False)),
        lambda: norm(_pure.dp2d_ground(10, 10, j10h, j10v, False)),
        args.repeat,
    )

    lat = make_lattice(2, (4, 4), "periodic")
    j16 = [rng.choice((-1, 1)) for _ in range(lat.n_bonds)]
    bench_case(
        "exhaustive ground state, 16 sites",
        lambda: norm(_core.exhaustive_ground(16, list(lat.bonds), j16)),
        lambda: norm(_pure.exhaustive_ground(16, list(lat.bonds), j16)),
        args.repeat,
    )

    if args.large:
        if _core is None:
            print("27-site exhaustive case skipped: extension not built")
        else:
            lat3 = make_lattice(3, (3, 3, 3), "free")
            j27 = [rng.choice((-1, 1)) for _ in range(lat3.n_bonds)]
            t0 = time.perf_counter()
            e, _ = _core.exhaustive_ground(27, list(lat3.bonds), j27)
            dt = time.perf_counter() - t0
            print(f"{'exhaustive ground state, 27 sites':<44} compiled {dt:9.2f} s    (E = {int(e)})")


if __name__ == "__main__":
    main()
