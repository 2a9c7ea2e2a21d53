"""Scaling benchmarks: empirical evidence for the subquadratic radius, the
quasi-linear eccentricity approximation, and the packed kernel win.

The brute-force baseline is n independent BFS runs, so its total per rung is
estimated from a fixed sample of sources (an unbiased extrapolation); the
algorithms under test are always timed in full.
"""

from __future__ import annotations

import statistics
import time

import numpy as np

from .generators import king_graph, random_chordal
from .graph import Graph
from .helly import SampleParams, radius
from .metrics import eccentricities_bruteforce, scipy_distance_rows

BRUTE_SAMPLE_SOURCES = 24


def _median_time(fn, runs: int) -> float:
    times = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def _warm(g: Graph):
    scipy_distance_rows(g, [0])
    from .metrics import bfs_distances

    bfs_distances(g, [0])


def brute_force_time_estimate(g: Graph, runs: int) -> float:
    """Median estimated wall time of all-sources BFS, extrapolated from a
    fixed source sample (the baseline is embarrassingly per-source)."""
    src = np.linspace(0, g.n - 1, BRUTE_SAMPLE_SOURCES).astype(int)

    def once():
        scipy_distance_rows(g, src)

    med = _median_time(once, runs)
    return med / BRUTE_SAMPLE_SOURCES * g.n


def king_ladder(scale: float = 1.0) -> list[tuple[int, Graph]]:
    sides = [100, 147, 215, 316]
    out = []
    for a in sides:
        a = max(10, int(a * scale))
        out.append((a, king_graph(a, a)))
    return out


def run_king_ladder(seed: int, runs: int = 5, scale: float = 1.0) -> list[dict]:
    rows = []
    for a, g in king_ladder(scale):
        _warm(g)
        t_helly = _median_time(lambda: radius(g, SampleParams(seed=seed)), runs)
        t_brute = brute_force_time_estimate(g, runs)
        rows.append({"n": g.n, "m": g.m, "algo": "helly_radius", "median_s": t_helly, "runs": runs})
        rows.append({"n": g.n, "m": g.m, "algo": "bruteforce_allbfs", "median_s": t_brute, "runs": runs})
    return rows


def run_chordal_ladder(seed: int, runs: int = 5, scale: float = 1.0) -> list[dict]:
    from .chordal import chordal_ecc_plus_one

    rows = []
    for n in (int(400 * scale), int(800 * scale), int(1600 * scale), int(3200 * scale)):
        g = random_chordal(max(16, n), seed=seed, density=0.3)
        _warm(g)
        t_fast = _median_time(lambda: chordal_ecc_plus_one(g), runs)
        t_brute = _median_time(lambda: eccentricities_bruteforce(g), runs)
        rows.append({"n": g.n, "m": g.m, "algo": "chordal_ecc_plus_one", "median_s": t_fast, "runs": runs})
        rows.append({"n": g.n, "m": g.m, "algo": "bruteforce_allbfs", "median_s": t_brute, "runs": runs})
    return rows


def run_split_kernels(seed: int, runs: int = 5, scale: float = 1.0) -> list[dict]:
    from .split import KERNELS, SetFamily

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    rows = []
    for k in (int(200 * scale), int(400 * scale), int(800 * scale)):
        k = max(8, k)
        ground = 4 * k
        sets = tuple(
            tuple(np.unique(rng.integers(0, ground, size=rng.integers(2, 12))).tolist())
            for _ in range(k)
        )
        fam = SetFamily(ground, sets)
        for kernel in ("naive", "packed"):
            t = _median_time(lambda: KERNELS[kernel](fam), runs)
            rows.append({"n": k, "m": sum(len(s) for s in sets),
                         "algo": f"disjoint_{kernel}", "median_s": t, "runs": runs})
    return rows


SUITES = {
    "king-ladder": run_king_ladder,
    "chordal-ladder": run_chordal_ladder,
    "split-kernels": run_split_kernels,
}


def run_suite(name: str, seed: int, runs: int = 5, scale: float = 1.0) -> list[dict]:
    return SUITES[name](seed=seed, runs=runs, scale=scale)


def loglog_slope(rows: list[dict], algo: str) -> float:
    pts = sorted((r["n"], r["median_s"]) for r in rows if r["algo"] == algo)
    xs = np.log([p[0] for p in pts])
    ys = np.log([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])
