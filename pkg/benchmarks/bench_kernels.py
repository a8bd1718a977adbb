"""Benchmark the numba and pure-numpy kernel paths side by side.

    python benchmarks/bench_kernels.py [--points 200000] [--vertices 512]

Builds a jagged ring and a random point cloud, then times point-in-ring,
min-distance-to-segments, and haversine on both backends. The numba path
includes an untimed warmup call so JIT compilation is excluded.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from fuzzygeo import kernels


def make_ring(n_vertices: int, rng: np.random.Generator):
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, n_vertices))
    radii = rng.uniform(0.6, 1.4, n_vertices)
    x = radii * np.cos(angles)
    y = radii * np.sin(angles)
    return np.append(x, x[0]), np.append(y, y[0])


def bench(fn, args, repeats=5) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--vertices", type=int, default=512)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    rx, ry = make_ring(args.vertices, rng)
    px = rng.uniform(-2, 2, args.points)
    py = rng.uniform(-2, 2, args.points)
    ax, ay, bx, by = rx[:-1], ry[:-1], rx[1:], ry[1:]
    lat1, lon1, lat2, lon2 = rng.uniform(-80, 80, (4, args.points))

    numpy_cases = {
        "point_in_ring": (kernels.points_in_ring_numpy, (px, py, rx, ry)),
        "min_dist_to_segments": (kernels.min_dist_to_segments_numpy,
                                 (px, py, ax, ay, bx, by)),
        "haversine_km": (kernels.haversine_km_numpy, (lat1, lon1, lat2, lon2)),
    }

    try:
        jit_hav, jit_pir, jit_mds = kernels._build_numba()
        have_numba = True
        numba_cases = {
            "point_in_ring": (jit_pir, (px, py, rx, ry)),
            "min_dist_to_segments": (jit_mds, (px, py, ax, ay, bx, by)),
            "haversine_km": (jit_hav, (lat1, lon1, lat2, lon2)),
        }
        for fn, a in numba_cases.values():  # warmup/JIT, untimed
            fn(*a)
    except ImportError:
        have_numba = False
        numba_cases = {}

    print(f"{args.points:,} points, ring of {args.vertices} vertices; "
          f"best of 5 runs (seconds)")
    header = f"{'kernel':<24}{'numpy':>10}"
    if have_numba:
        header += f"{'numba':>10}{'speedup':>10}"
    print(header)
    for name, (np_fn, np_args) in numpy_cases.items():
        t_np = bench(np_fn, np_args)
        row = f"{name:<24}{t_np:>10.4f}"
        if have_numba:
            jit_fn, jit_args = numba_cases[name]
            t_jit = bench(jit_fn, jit_args)
            row += f"{t_jit:>10.4f}{t_np / t_jit:>9.1f}x"
        print(row)
    if not have_numba:
        print("(numba not importable; numpy path only)")


if __name__ == "__main__":
    main()
