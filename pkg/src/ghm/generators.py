"""Certified instance generators and the named test fixtures.

Every generator's output passes the matching class recognizer; the random
ones take an explicit seed and are deterministic per seed.
"""

from __future__ import annotations

import numpy as np

from .errors import GenerationFailed, GraphFormatError
from .graph import Graph
from .oracles import is_chordal, is_helly_ballfamily, is_split


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def king_graph(a: int, b: int) -> Graph:
    """a x b king-move grid (8-neighbor adjacency)."""
    if a < 1 or b < 1:
        raise GraphFormatError("king grid sides must be >= 1")
    edges = []
    for i in range(a):
        for j in range(b):
            v = i * b + j
            for di, dj in ((0, 1), (1, -1), (1, 0), (1, 1)):
                ni, nj = i + di, j + dj
                if 0 <= ni < a and 0 <= nj < b:
                    edges.append((v, ni * b + nj))
    return Graph.from_edges(a * b, edges)


def tree(n: int, shape: str = "random", seed: int = 0) -> Graph:
    """Tree on n vertices; shapes: path, star, caterpillar, spider, random (Pruefer)."""
    if n < 1:
        raise GraphFormatError("tree size must be >= 1")
    if n == 1:
        return Graph.from_edges(1, [])
    if shape == "path":
        return path_graph(n)
    if shape == "star":
        return star_graph(n - 1)
    if shape == "caterpillar":
        spine = max(2, n // 2)
        edges = [(i, i + 1) for i in range(spine - 1)]
        rng = _rng(seed)
        for v in range(spine, n):
            edges.append((int(rng.integers(spine)), v))
        return Graph.from_edges(n, edges)
    if shape == "spider":
        legs = max(2, min(5, n // 3)) if n >= 4 else 2
        edges = []
        prev = [0] * legs
        v = 1
        while v < n:
            leg = (v - 1) % legs
            edges.append((prev[leg], v))
            prev[leg] = v
            v += 1
        return Graph.from_edges(n, edges)
    if shape == "random":
        rng = _rng(seed)
        if n == 2:
            return Graph.from_edges(2, [(0, 1)])
        pruefer = rng.integers(0, n, size=n - 2)
        deg = np.ones(n, dtype=np.int64)
        for x in pruefer:
            deg[x] += 1
        import heapq

        leaves = [v for v in range(n) if deg[v] == 1]
        heapq.heapify(leaves)
        edges = []
        for x in pruefer.tolist():
            leaf = heapq.heappop(leaves)
            edges.append((leaf, x))
            deg[x] -= 1
            if deg[x] == 1:
                heapq.heappush(leaves, x)
        u, v = sorted(leaves)[:2]
        edges.append((u, v))
        return Graph.from_edges(n, edges)
    raise GraphFormatError(f"unknown tree shape {shape!r}")


def random_chordal(n: int, seed: int = 0, density: float = 0.35) -> Graph:
    """Random connected chordal graph grown along a random perfect elimination order.

    Vertex v < n-1 attaches to a random clique inside the already-built
    suffix, so eliminating 0, 1, ..., n-1 is a valid PEO by construction.
    """
    if n < 1:
        raise GraphFormatError("size must be >= 1")
    rng = _rng(seed)
    upper: list[set] = [set() for _ in range(n)]
    for v in range(n - 2, -1, -1):
        u = int(rng.integers(v + 1, n))
        pool = sorted(upper[u])
        keep = [w for w in pool if rng.random() < density]
        upper[v] = {u, *keep}
    edges = [(v, w) for v in range(n) for w in upper[v]]
    return Graph.from_edges(n, edges)


def random_split(n: int, seed: int = 0) -> Graph:
    rng = _rng(seed)
    if n == 1:
        return Graph.from_edges(1, [])
    csize = int(rng.integers(1, n)) if n > 2 else 1
    clique = list(range(csize))
    edges = [(i, j) for i in range(csize) for j in range(i + 1, csize)]
    for u in range(csize, n):
        k = int(rng.integers(1, csize + 1))
        for c in rng.choice(csize, size=k, replace=False).tolist():
            edges.append((c, u))
    return Graph.from_edges(n, edges)


def random_split_helly(n: int, seed: int = 0, max_attempts: int = 10_000) -> Graph:
    """Rejection sampling of split graphs against the ball-Helly oracle."""
    root = np.random.SeedSequence(int(seed))
    for attempt, child in enumerate(root.spawn(max_attempts)):
        g = random_split(n, seed=child.generate_state(1)[0])
        if not g.is_connected:
            continue
        if is_helly_ballfamily(g).holds:
            return g
    raise GenerationFailed(f"no split Helly graph of size {n} in {max_attempts} attempts")


_FIXTURE_EDGES = {
    "P5": (5, [(0, 1), (1, 2), (2, 3), (3, 4)]),
    "STAR4": (5, [(0, 1), (0, 2), (0, 3), (0, 4)]),
    "C4": (4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
    "K4": (4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    # 3-sun: triangle a=0, b=1, c=2 with x=3 adj {a,b}, y=4 adj {b,c}, z=5 adj {a,c}
    "SUN3": (6, [(0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (4, 1), (4, 2), (5, 0), (5, 2)]),
    # split: clique {0,1,2}; stable 3 adj {0}, 4 adj {1}
    "SPLIT-H2": (5, [(0, 1), (0, 2), (1, 2), (3, 0), (4, 1)]),
}


def fixture(name: str) -> Graph:
    """Canonical named fixtures reused throughout the test suite."""
    key = name.upper()
    if key == "KING33":
        return king_graph(3, 3)
    if key not in _FIXTURE_EDGES:
        raise GraphFormatError(f"unknown fixture {name!r}")
    n, edges = _FIXTURE_EDGES[key]
    return Graph.from_edges(n, edges)


FIXTURE_NAMES = tuple(sorted([*_FIXTURE_EDGES, "KING33"]))


def generate(kind: str, **params) -> Graph:
    """Dispatcher used by the CLI: tree, king, random_chordal, random_split_helly, fixture."""
    if kind == "tree":
        return tree(int(params["n"]), shape=params.get("shape", "random"), seed=int(params.get("seed", 0)))
    if kind == "king":
        return king_graph(int(params["a"]), int(params["b"]))
    if kind == "random_chordal":
        return random_chordal(int(params["n"]), seed=int(params.get("seed", 0)),
                              density=float(params.get("density", 0.35)))
    if kind == "random_split_helly":
        return random_split_helly(int(params["n"]), seed=int(params.get("seed", 0)))
    if kind == "fixture":
        return fixture(params["name"])
    raise GraphFormatError(f"unknown generator kind {kind!r}")


def chordal_helly_instances(count: int, n_range=(12, 64), seed: int = 17,
                            max_attempts: int = 10_000) -> list[tuple[str, Graph]]:
    """Rejection-sample random chordal graphs that the ball-Helly oracle certifies."""
    rng = _rng(seed)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > max_attempts:
            raise GenerationFailed("chordal-Helly rejection budget exhausted")
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        s = int(rng.integers(1 << 31))
        g = random_chordal(n, seed=s, density=float(rng.uniform(0.15, 0.5)))
        if not g.is_connected:
            continue
        if is_helly_ballfamily(g).holds:
            out.append((f"chordal-helly-n{n}-s{s}", g))
    return out


def helly_corpus(seed: int = 5, large: bool = True) -> list[tuple[str, Graph, str]]:
    """Certified Helly instances: (name, graph, certification method).

    Trees and king grids are Helly for structural reasons (tree balls are
    subtrees; king balls are axis boxes), spot-checked against the oracle at
    small sizes; chordal-Helly instances are oracle-certified one by one.
    """
    rng = _rng(seed)
    out: list[tuple[str, Graph, str]] = []
    for name in ("P5", "STAR4", "K4", "KING33"):
        out.append((name, fixture(name), "oracle"))
    sizes_small = [int(x) for x in rng.integers(8, 200, size=90)]
    sizes_mid = [int(x) for x in rng.integers(200, 600, size=28)]
    sizes_big = [int(x) for x in rng.integers(600, 1200, size=10)] if large else []
    sizes_xl = [700, 1500, 1800, 2000] if large else []
    shapes = ("random", "path", "caterpillar", "spider", "star")
    for i, n in enumerate(sizes_small + sizes_mid + sizes_big):
        shape = shapes[i % len(shapes)]
        out.append((f"tree-{shape}-n{n}-i{i}", tree(n, shape=shape, seed=seed + i), "structural:tree"))
    for i, n in enumerate(sizes_xl):
        out.append((f"tree-random-n{n}-xl{i}", tree(n, shape="random", seed=seed + 900 + i), "structural:tree"))
        out.append((f"tree-path-n{n}-xl{i}", path_graph(n), "structural:tree"))
    king_dims = [(3, 5), (4, 4), (2, 9), (5, 5), (7, 6), (2, 30), (10, 10), (3, 40),
                 (14, 14), (2, 150), (20, 20), (4, 120), (30, 30), (2, 500), (40, 40), (25, 64)]
    if large:
        king_dims += [(44, 44), (2, 1000), (8, 250)]
    for a, b in king_dims:
        out.append((f"king-{a}x{b}", king_graph(a, b), "structural:king"))
    out.extend((n_, g, "oracle") for n_, g in chordal_helly_instances(42, seed=seed + 1))
    return out


def c4free_helly_corpus(seed: int = 7) -> list[tuple[str, Graph, str]]:
    """Certified C4-free Helly instances: trees, 2-row king strips, chordal-Helly.

    King grids with both sides >= 3 contain an induced C4 (the diamond of the
    four edge-midpoint cells), so only 2-row strips qualify here.
    """
    rng = _rng(seed)
    out: list[tuple[str, Graph, str]] = [
        ("P5", fixture("P5"), "oracle"),
        ("STAR4", fixture("STAR4"), "oracle"),
        ("K4", fixture("K4"), "oracle"),
    ]
    shapes = ("random", "path", "caterpillar", "spider", "star")
    sizes = [int(x) for x in rng.integers(8, 250, size=60)]
    sizes += [int(x) for x in rng.integers(250, 1200, size=14)]
    sizes += [1500, 2000]
    for i, n in enumerate(sizes):
        shape = shapes[i % len(shapes)]
        out.append((f"tree-{shape}-n{n}-i{i}", tree(n, shape=shape, seed=seed + i), "structural:tree"))
    for b in (4, 9, 25, 60, 128, 400, 1000):
        out.append((f"king-strip-2x{b}", king_graph(2, b), "structural:king-strip"))
    out.extend((n_, g, "oracle") for n_, g in chordal_helly_instances(30, seed=seed + 2))
    # instances whose double sweep undershoots the diameter by one; these
    # drive the split-reduction and even-diameter-probe branches
    for s in (737, 1590, 3005, 2853):
        r = _rng(s)
        n = int(r.integers(8, 40))
        g = random_chordal(n, seed=s, density=float(r.uniform(0.1, 0.7)))
        if is_helly_ballfamily(g).holds:
            out.append((f"sweep-gap-s{s}", g, "oracle"))
    return out


def chordal_corpus(seed: int = 11, count: int = 100, n_max: int = 2000) -> list[tuple[str, Graph]]:
    """Random connected chordal graphs plus the chordal fixtures."""
    rng = _rng(seed)
    out = [("P5", fixture("P5")), ("K4", fixture("K4")), ("SUN3", fixture("SUN3")),
           ("STAR4", fixture("STAR4"))]
    lo_band = (8, min(120, n_max))
    mid_band = (min(120, n_max), min(600, n_max + 1))
    hi_band = (min(600, n_max), n_max + 1)
    sizes = np.concatenate([
        rng.integers(lo_band[0], max(lo_band[0] + 1, lo_band[1]), size=int(count * 0.55)),
        rng.integers(mid_band[0], max(mid_band[0] + 1, mid_band[1]), size=int(count * 0.3)),
        rng.integers(hi_band[0], max(hi_band[0] + 1, hi_band[1]),
                     size=count - int(count * 0.55) - int(count * 0.3)),
    ])
    for i, n in enumerate(sizes.tolist()):
        g = random_chordal(int(n), seed=seed + 31 * i, density=float(rng.uniform(0.1, 0.6)))
        out.append((f"chordal-n{n}-i{i}", g))
    return out


def telescope_split(k: int) -> Graph:
    """Split graph with nested stable neighborhoods {0..2k-2j} plus one final
    stable vertex seeing {3..2k}; every prefix of the fold keeps a nonempty
    running intersection until the last step, so the refinement runs k-1
    steps before the disjoint pair (last nest, tail) fires."""
    c = 2 * k + 1
    edges = [(i, j) for i in range(c) for j in range(i + 1, c)]
    u = c
    for j in range(1, k + 1):
        for x in range(0, c - 2 * j):
            edges.append((x, u))
        u += 1
    for x in range(3, c):
        edges.append((x, u))
    return Graph.from_edges(u + 1, edges)


def split_helly_corpus(seed: int = 13) -> list[tuple[str, Graph]]:
    """Oracle-certified split Helly instances, small enough for the desk oracle."""
    out = [("SPLIT-H2", fixture("SPLIT-H2")), ("K4", fixture("K4"))]
    for k in (3, 5, 8, 12, 20):
        g = telescope_split(k)
        if is_helly_ballfamily(g).holds:
            out.append((f"telescope-split-k{k}", g))
    rng = _rng(seed)
    for i in range(40):
        n = int(rng.integers(5, 64))
        try:
            out.append((f"split-helly-n{n}-i{i}", random_split_helly(n, seed=seed + i, max_attempts=4000)))
        except GenerationFailed:
            continue
    return out
