"""BFS machinery and basic metric primitives (balls, slices, projections).

Two independent distance engines live here: a numpy frontier BFS used by the
algorithms, and a scipy ``csgraph`` route used by the brute-force oracle.
Tests cross-check them against each other.
"""

from __future__ import annotations

import math

from dataclasses import dataclass

import numpy as np

from .errors import Disconnected, EmptySourceSet, KOutOfRange
from .graph import Graph, VertexSet, as_members

UNREACHABLE = -1


@dataclass(frozen=True)
class DistanceRow:
    """Hop counts from a source set; UNREACHABLE (-1) marks missed vertices."""

    sources: tuple
    dist: np.ndarray

    @property
    def reached_all(self) -> bool:
        return bool((self.dist >= 0).all())

    def eccentricity(self) -> int:
        if not self.reached_all:
            raise Disconnected("eccentricity undefined: unreachable vertices exist")
        return int(self.dist.max())


def _level_cap(n: int) -> int:
    # beyond this many BFS levels the per-level numpy overhead loses to the
    # compiled csgraph route, so the engines hand over
    return max(96, 4 * int(math.isqrt(n)))


def _scipy_min_row(g: Graph, src: np.ndarray) -> np.ndarray:
    from scipy.sparse.csgraph import dijkstra

    d = dijkstra(g._scipy_csr, directed=True, unweighted=True, indices=src, min_only=True)
    return np.where(np.isinf(d), UNREACHABLE, d).astype(np.int32)


def bfs_distances(g: Graph, sources) -> np.ndarray:
    """Multi-source BFS distance array; engine picked by observed depth."""
    src = as_members(sources, g.n)
    if src.size == 0:
        raise EmptySourceSet("BFS requires at least one source")
    dist = np.full(g.n, UNREACHABLE, dtype=np.int32)
    dist[src] = 0
    frontier = src.astype(np.int64)
    indptr, indices = g.indptr, g.indices
    level = 0
    cap = _level_cap(g.n)
    while frontier.size:
        if level > cap:
            return _scipy_min_row(g, src)
        starts = indptr[frontier]
        counts = indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts[:-1]))), counts)
        nb = indices[offsets + np.arange(total)]
        fresh = nb[dist[nb] < 0]
        if fresh.size == 0:
            break
        level += 1
        dist[fresh] = level
        frontier = np.unique(fresh).astype(np.int64)
    return dist


def bfs(g: Graph, sources) -> DistanceRow:
    """Exact unweighted multi-source distances."""
    src = as_members(sources, g.n)
    if src.size == 0:
        raise EmptySourceSet("BFS requires at least one source")
    return DistanceRow(sources=tuple(src.tolist()), dist=bfs_distances(g, src))


def distance_rows(g: Graph, sources, batch: int = 16) -> np.ndarray:
    """Per-source BFS distance matrix (len(sources), n).

    Sources are batched and expanded as (slot, vertex) keys so per-level
    numpy overhead is shared across a batch; graphs that turn out deep are
    handed to the compiled csgraph route instead.
    """
    src = as_members(sources, g.n)
    k = len(src)
    # int16 level slab: the level cap keeps depths far below the dtype limit,
    # and the narrower rows matter on the random-access inner loop
    out = np.full((k, g.n), UNREACHABLE, dtype=np.int16)
    indptr, indices = g.indptr, g.indices
    n = g.n
    cap = _level_cap(n)
    lo = 0
    deep_from = None
    while lo < k:
        chunk = src[lo:lo + batch]
        b = len(chunk)
        dist = out[lo:lo + b].reshape(-1)
        slots = np.arange(b, dtype=np.int64) * n
        dist[slots + chunk] = 0
        frontier = slots + chunk
        level = 0
        deep = False
        while frontier.size:
            if level > cap:
                deep = True
                break
            v = frontier % n
            starts = indptr[v]
            counts = indptr[v + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            base = frontier - v
            offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts[:-1]))), counts)
            keys = np.repeat(base, counts) + indices[offsets + np.arange(total)]
            fresh = keys[dist[keys] < 0]
            if fresh.size == 0:
                break
            level += 1
            dist[fresh] = level
            frontier = np.unique(fresh)
        if deep:
            deep_from = lo
            break
        lo += b
    result = out.astype(np.int32)
    if deep_from is not None:
        result[deep_from:] = scipy_distance_rows(g, src[deep_from:])
    return result


def landmark_max_distances(g: Graph, landmarks, batch: int = 4) -> np.ndarray:
    """max over landmarks of dist(u, v), fused into the batched BFS.

    Aggregating inside each batch keeps the working set at one int16 slab,
    which is what the bandwidth-bound big-graph case wants; deep graphs hand
    over to the compiled route as usual.
    """
    src = as_members(landmarks, g.n)
    if src.size == 0:
        raise EmptySourceSet("landmark set is empty")
    n = g.n
    maxdist = np.zeros(n, dtype=np.int32)
    indptr, indices = g.indptr, g.indices
    cap = _level_cap(n)
    slab = np.empty(min(batch, len(src)) * n, dtype=np.int16)
    lo = 0
    while lo < len(src):
        chunk = src[lo:lo + batch]
        b = len(chunk)
        dist = slab[:b * n]
        dist.fill(UNREACHABLE)
        slots = np.arange(b, dtype=np.int64) * n
        dist[slots + chunk] = 0
        frontier = slots + chunk
        level = 0
        deep = False
        while frontier.size:
            if level > cap:
                deep = True
                break
            v = frontier % n
            starts = indptr[v]
            counts = indptr[v + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            base = frontier - v
            offsets = np.repeat(starts - np.concatenate(([0], np.cumsum(counts[:-1]))), counts)
            keys = np.repeat(base, counts) + indices[offsets + np.arange(total)]
            fresh = keys[dist[keys] < 0]
            if fresh.size == 0:
                break
            level += 1
            dist[fresh] = level
            frontier = np.unique(fresh)
        if deep:
            for hi in range(lo, len(src), 64):
                rows = scipy_distance_rows(g, src[hi:hi + 64])
                np.maximum(maxdist, rows.max(axis=0), out=maxdist)
            return maxdist
        np.maximum(maxdist, dist.reshape(b, n).max(axis=0), out=maxdist)
        lo += b
    return maxdist


def scipy_distance_rows(g: Graph, sources) -> np.ndarray:
    """Per-source distances via scipy's csgraph (independent of the frontier engine)."""
    from scipy.sparse.csgraph import dijkstra

    src = as_members(sources, g.n)
    d = dijkstra(g._scipy_csr, directed=True, unweighted=True, indices=src)
    d = np.atleast_2d(d)
    out = np.where(np.isinf(d), UNREACHABLE, d).astype(np.int32)
    return out


@dataclass(frozen=True)
class EccentricityTable:
    """Ground-truth eccentricities with the derived radius/diameter data."""

    ecc: np.ndarray
    radius: int
    diameter: int
    center: VertexSet
    diametral_pair: tuple

    def farthest(self, v: int) -> int:
        return int(self.ecc[v])


def eccentricities_bruteforce(g: Graph, chunk: int = 256) -> EccentricityTable:
    """Exact e(v) for every vertex by BFS from every vertex (textbook O(nm)).

    Deliberately routed through scipy so it stays independent of the frontier
    engine it is used to check.
    """
    if not g.is_connected:
        raise Disconnected("eccentricities require a connected graph")
    ecc = np.zeros(g.n, dtype=np.int64)
    pair = (0, 0, -1)
    for lo in range(0, g.n, chunk):
        rows = scipy_distance_rows(g, np.arange(lo, min(lo + chunk, g.n)))
        ecc[lo:lo + rows.shape[0]] = rows.max(axis=1)
        i = int(np.argmax(rows))
        r, c = divmod(i, rows.shape[1])
        if rows[r, c] > pair[2]:
            pair = (lo + r, c, int(rows[r, c]))
    radius = int(ecc.min())
    diameter = int(ecc.max())
    center = VertexSet.from_mask(ecc == radius)
    return EccentricityTable(
        ecc=ecc,
        radius=radius,
        diameter=diameter,
        center=center,
        diametral_pair=(pair[0], pair[1]),
    )


def ball(g: Graph, v: int, r: int) -> VertexSet:
    """Closed ball of radius r around v."""
    v = g.check_vertex(v)
    if r < 0:
        raise KOutOfRange("ball radius must be >= 0")
    dist = bfs_distances(g, [v])
    return VertexSet.from_mask((dist >= 0) & (dist <= r))


def slice_set(g: Graph, u: int, k: int, v: int) -> VertexSet:
    """Vertices on shortest u-v paths at distance exactly k from u."""
    u, v = g.check_vertex(u), g.check_vertex(v)
    du = bfs_distances(g, [u])
    if du[v] < 0:
        raise Disconnected(f"no path between {u} and {v}")
    d = int(du[v])
    if not 0 <= k <= d:
        raise KOutOfRange(f"k={k} outside 0..dist(u,v)={d}")
    dv = bfs_distances(g, [v])
    return VertexSet.from_mask((du == k) & (du + dv == d))


def projection(g: Graph, v: int, targets) -> tuple[int, VertexSet]:
    """Distance from v to the set plus the full argmin (metric projection)."""
    v = g.check_vertex(v)
    members = as_members(targets, g.n)
    if members.size == 0:
        raise EmptySourceSet("projection target set is empty")
    dist = bfs_distances(g, [v])
    dts = dist[members]
    if (dts < 0).all():
        raise Disconnected(f"vertex {v} cannot reach the target set")
    dmin = int(dts[dts >= 0].min())
    return dmin, VertexSet(g.n, members[dts == dmin])


def require_connected(g: Graph):
    if not g.is_connected:
        raise Disconnected("operation requires a connected graph")
