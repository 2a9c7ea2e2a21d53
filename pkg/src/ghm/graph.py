"""Immutable compact graph representation and edge-list I/O.

Graphs are undirected, simple and unweighted.  Adjacency is stored CSR-style
(flat ``indptr``/``indices`` arrays, neighbor lists sorted ascending) so that
neighborhood merges and intersections are cheap.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphFormatError, VertexOutOfRange


class Graph:
    """Undirected simple graph over vertices 0..n-1, immutable after construction."""

    __slots__ = ("n", "m", "indptr", "indices", "__dict__")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        # Internal constructor; use from_edges / from_text.
        self.n = int(n)
        self.m = int(len(indices) // 2)
        self.indptr = indptr
        self.indices = indices
        indptr.setflags(write=False)
        indices.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph from an iterable of (u, v) pairs, validating simplicity."""
        if n < 1:
            raise GraphFormatError("vertex count must be >= 1")
        e = np.asarray(list(edges), dtype=np.int64)
        if e.size == 0:
            e = e.reshape(0, 2)
        if e.ndim != 2 or e.shape[1] != 2:
            raise GraphFormatError("edges must be pairs")
        if e.size and (e.min() < 0 or e.max() >= n):
            raise VertexOutOfRange(f"edge endpoint outside 0..{n - 1}")
        if np.any(e[:, 0] == e[:, 1]):
            raise GraphFormatError("self-loops are not allowed")
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        if len(src) > 1:
            dup = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
            if dup.any():
                i = int(np.flatnonzero(dup)[0])
                raise GraphFormatError(f"duplicate edge ({src[i]}, {dst[i]})")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst.astype(np.int32))

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @cached_property
    def degrees(self) -> np.ndarray:
        d = (self.indptr[1:] - self.indptr[:-1]).astype(np.int64)
        d.setflags(write=False)
        return d

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor ids of v (read-only view)."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return i < len(nb) and nb[i] == v

    @cached_property
    def _scipy_csr(self):
        from scipy.sparse import csr_matrix

        data = np.ones(len(self.indices), dtype=np.int8)
        return csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def is_connected(self) -> bool:
        from .metrics import bfs_distances

        return bool((bfs_distances(self, [0]) >= 0).all())

    def check_vertex(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{self.n - 1}")
        return v

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int32), np.diff(self.indptr))
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self):
        return hash((self.n, self.m, self.indices.tobytes()))


class VertexSet:
    """Vertex subset with a sorted list view and a packed membership view."""

    def __init__(self, n: int, members: Iterable[int]):
        self.n = int(n)
        arr = np.unique(np.asarray(list(members), dtype=np.int32))
        if arr.size and (arr[0] < 0 or arr[-1] >= n):
            raise VertexOutOfRange(f"member outside 0..{n - 1}")
        arr.setflags(write=False)
        self.members = arr

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "VertexSet":
        return cls(len(mask), np.flatnonzero(mask))

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[self.members] = True
        m.setflags(write=False)
        return m

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members.tolist())

    def __contains__(self, v) -> bool:
        i = np.searchsorted(self.members, v)
        return i < len(self.members) and self.members[i] == v

    def __eq__(self, other) -> bool:
        if isinstance(other, VertexSet):
            return self.n == other.n and np.array_equal(self.members, other.members)
        if isinstance(other, (set, frozenset)):
            return set(self.members.tolist()) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.n, self.members.tobytes()))

    def __repr__(self) -> str:
        return f"VertexSet({set(self.members.tolist())!r})"


def as_members(sources, n: int) -> np.ndarray:
    """Normalize a VertexSet / iterable / scalar into a sorted unique id array."""
    if isinstance(sources, VertexSet):
        return sources.members
    if np.isscalar(sources):
        sources = [sources]
    arr = np.unique(np.asarray(list(sources), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise VertexOutOfRange(f"vertex outside 0..{n - 1}")
    return arr.astype(np.int32)


def induced_subgraph(g: Graph, vertices) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the given vertices plus the old-id array.

    Vertex i of the subgraph corresponds to old id ``old_ids[i]``.
    """
    old_ids = as_members(vertices, g.n)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[old_ids] = np.arange(len(old_ids))
    edges = []
    for i, v in enumerate(old_ids.tolist()):
        nb = g.neighbors(v)
        kept = nb[new_id[nb] >= 0]
        for u in new_id[kept].tolist():
            if u > i:
                edges.append((i, u))
    return Graph.from_edges(max(len(old_ids), 1), edges), old_ids


def read_edgelist(text: str) -> Graph:
    """Parse the edge-list format: header line ``n m`` then m lines ``u v``.

    ``#`` starts a comment; blank lines are ignored.
    """
    header = None
    edges = []
    expected = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise GraphFormatError("expected header 'n m'", line=lineno)
            try:
                n, expected = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError("header fields must be integers", line=lineno)
            header = (n, expected)
            continue
        if len(parts) != 2:
            raise GraphFormatError("expected edge 'u v'", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("edge endpoints must be integers", line=lineno)
        edges.append((u, v))
    if header is None:
        raise GraphFormatError("empty input; expected header 'n m'")
    n, expected = header
    if len(edges) != expected:
        raise GraphFormatError(f"header declares {expected} edges, found {len(edges)}")
    try:
        return Graph.from_edges(n, edges)
    except (GraphFormatError, VertexOutOfRange) as exc:
        raise GraphFormatError(str(exc)) from exc


def write_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges().tolist())
    return "\n".join(lines) + "\n"


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return read_edgelist(fh.read())
