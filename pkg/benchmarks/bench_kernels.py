"""Time the hydrology and routing kernels on each available backend.

    python3 benchmarks/bench_kernels.py --size 200 --repeat 3
"""
import argparse
import time

import numpy as np

from riparian_accounts import kernels
from riparian_accounts.erosion import route_sediment
from riparian_accounts.grid import Grid, LandCoverGrid
from riparian_accounts.hydrology import fill_pits, flow_accumulation, flow_direction_d8


def synthetic_dem(n: int, seed: int) -> Grid:
    rng = np.random.default_rng(seed)
    r, c = np.mgrid[0:n, 0:n]
    z = 50.0 + 0.5 * (n - r) + 2.0 * np.abs(c - n / 2) ** 0.8 + rng.uniform(-3, 3, (n, n))
    return Grid.from_array(z, cellsize=30.0)


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def run(backend: str, dem: Grid, repeat: int) -> dict[str, float]:
    kernels.set_backend(backend)
    times = {}
    times["fill"], filled = best_of(lambda: fill_pits(dem), repeat)
    times["d8"], dirs = best_of(lambda: flow_direction_d8(filled), repeat)
    times["accumulate"], _ = best_of(lambda: flow_accumulation(dirs), repeat)
    lc = LandCoverGrid.from_grid(dem.with_values(np.ones(dem.shape)))
    load = dem.with_values(np.ones(dem.shape))
    times["route"], _ = best_of(lambda: route_sediment(load, dirs, {1: 0.2}, lc), repeat)
    return times


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--size", type=int, default=200, help="grid side length in cells")
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    dem = synthetic_dem(args.size, args.seed)
    previous = kernels.backend_name()
    results = {b: run(b, dem, args.repeat) for b in kernels.available()}
    kernels.set_backend(previous)

    stages = list(next(iter(results.values())))
    print(f"{args.size}x{args.size} cells, best of {args.repeat}")
    print(f"{'stage':<12}" + "".join(f"{b:>12}" for b in results) + ("     speedup" if len(results) > 1 else ""))
    for stage in stages:
        row = f"{stage:<12}" + "".join(f"{results[b][stage] * 1e3:>10.1f}ms" for b in results)
        if "cython" in results and "python" in results:
            row += f"{results['python'][stage] / results['cython'][stage]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
