"""Split-graph solvers: diametral pair for split Helly graphs, split diameter,
and the Disjoint Set kernels behind it."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ClassViolation, Disconnected, GraphFormatError
from .graph import Graph


@dataclass(frozen=True)
class SparseSplit:
    """Split graph as clique + stable set + stable-side neighbor lists.

    Vertex ids are arbitrary distinct non-negative integers; each stable
    vertex's neighbor list is a subset of the clique.  ``size`` is the sum of
    stable degrees, the size of the sparse representation.
    """

    clique: tuple
    stable: tuple
    nbrs: tuple  # tuple of tuples, aligned with `stable`

    def __post_init__(self):
        cset = set(self.clique)
        if len(cset) != len(self.clique):
            raise GraphFormatError("duplicate clique ids")
        sset = set(self.stable)
        if len(sset) != len(self.stable) or cset & sset:
            raise GraphFormatError("stable ids must be distinct from the clique")
        if len(self.nbrs) != len(self.stable):
            raise GraphFormatError("one neighbor list per stable vertex required")
        for u, nb in zip(self.stable, self.nbrs):
            if not set(nb) <= cset:
                raise GraphFormatError(f"neighbors of {u} must lie in the clique")
            if len(set(nb)) != len(nb):
                raise GraphFormatError(f"duplicate neighbor of {u}")

    @property
    def size(self) -> int:
        return sum(len(nb) for nb in self.nbrs)

    @property
    def n(self) -> int:
        return len(self.clique) + len(self.stable)

    @classmethod
    def from_graph(cls, g: Graph) -> "SparseSplit":
        from .oracles import is_split

        cert = is_split(g)
        if not cert.holds:
            raise GraphFormatError("graph is not split")
        clique, stable = cert.witness
        nbrs = tuple(tuple(g.neighbors(u).tolist()) for u in stable)
        return cls(tuple(clique), tuple(stable), nbrs)

    def to_graph(self) -> tuple[Graph, dict]:
        """Compact relabeled Graph plus the old-id -> new-id map."""
        ids = sorted([*self.clique, *self.stable])
        new = {v: i for i, v in enumerate(ids)}
        edges = [(new[a], new[b]) for i, a in enumerate(self.clique) for b in self.clique[i + 1:]]
        for u, nb in zip(self.stable, self.nbrs):
            edges.extend((new[u], new[c]) for c in nb)
        return Graph.from_edges(len(ids), edges), new


def read_sparse_split(text: str) -> SparseSplit:
    """Parse the sparse-split format: 'nC nU', clique ids, then 'u: c1 c2 ...'."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [(i + 1, ln) for i, ln in enumerate(lines)]
    body = [(i, ln) for i, ln in lines if ln]
    if not body:
        raise GraphFormatError("empty sparse-split input")
    lineno, header = body[0]
    try:
        nc, nu = map(int, header.split())
    except ValueError:
        raise GraphFormatError("expected header 'nC nU'", line=lineno)
    if len(body) < 2 and nc > 0:
        raise GraphFormatError("missing clique line", line=lineno)
    if nc > 0:
        lineno2, cline = body[1]
        try:
            clique = tuple(int(x) for x in cline.split())
        except ValueError:
            raise GraphFormatError("clique ids must be integers", line=lineno2)
        if len(clique) != nc:
            raise GraphFormatError(f"expected {nc} clique ids", line=lineno2)
        rest = body[2:]
    else:
        clique = ()
        rest = body[1:]
    if len(rest) != nu:
        raise GraphFormatError(f"expected {nu} stable lines, found {len(rest)}")
    stable, nbrs = [], []
    for lineno3, ln in rest:
        if ":" not in ln:
            raise GraphFormatError("expected 'u: c1 c2 ...'", line=lineno3)
        left, right = ln.split(":", 1)
        try:
            stable.append(int(left))
            nbrs.append(tuple(int(x) for x in right.split()))
        except ValueError:
            raise GraphFormatError("ids must be integers", line=lineno3)
    return SparseSplit(clique, tuple(stable), tuple(nbrs))


def write_sparse_split(h: SparseSplit) -> str:
    lines = [f"{len(h.clique)} {len(h.stable)}"]
    lines.append(" ".join(str(c) for c in h.clique))
    for u, nb in zip(h.stable, h.nbrs):
        lines.append(f"{u}: " + " ".join(str(c) for c in nb))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SetFamily:
    """Disjoint Set instance: nonempty subsets of range(ground_size)."""

    ground_size: int
    sets: tuple

    def __post_init__(self):
        for s in self.sets:
            if not s:
                raise GraphFormatError("sets must be nonempty")
            if min(s) < 0 or max(s) >= self.ground_size:
                raise GraphFormatError("set element outside the ground set")


def disjoint_set_naive(family: SetFamily):
    """Exhaustive pairwise scan; returns the first disjoint index pair or None."""
    sets = [frozenset(s) for s in family.sets]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if sets[i].isdisjoint(sets[j]):
                return i, j
    return None


def _pack_masks(family: SetFamily) -> np.ndarray:
    words = max(1, -(-family.ground_size // 64))
    m = np.zeros((len(family.sets), words), dtype=np.uint64)
    for i, s in enumerate(family.sets):
        for x in s:
            m[i, x >> 6] |= np.uint64(1) << np.uint64(x & 63)
    return m


def disjoint_set_bitpacked(family: SetFamily):
    """Word-parallel membership masks; same verdict contract as the naive scan
    (any valid disjoint pair is acceptable)."""
    masks = _pack_masks(family)
    k = len(family.sets)
    for i in range(k - 1):
        inter = masks[i] & masks[i + 1:]
        hits = ~inter.any(axis=1)
        if hits.any():
            return i, i + 1 + int(np.argmax(hits))
    return None


KERNELS = {"naive": disjoint_set_naive, "packed": disjoint_set_bitpacked}


def _check_connected(h: SparseSplit):
    if h.n == 1:
        return
    if not h.clique:
        raise Disconnected("no clique vertices to connect the stable set")
    for u, nb in zip(h.stable, h.nbrs):
        if not nb:
            raise Disconnected(f"stable vertex {u} has no neighbors")


def _is_complete(h: SparseSplit) -> bool:
    if not h.stable:
        return True
    return len(h.stable) == 1 and len(h.nbrs[0]) == len(h.clique)


def disjoint_stable_pair(h: SparseSplit, kernel: str = "packed"):
    """Two stable vertices with disjoint neighborhoods, or None; these are
    exactly the distance-three pairs of a connected split graph."""
    if len(h.stable) < 2:
        return None
    cidx = {c: i for i, c in enumerate(h.clique)}
    family = SetFamily(len(h.clique), tuple(tuple(cidx[c] for c in nb) for nb in h.nbrs))
    hit = KERNELS[kernel](family)
    if hit is None:
        return None
    return h.stable[hit[0]], h.stable[hit[1]]


def split_diameter(h: SparseSplit, kernel: str = "packed") -> int:
    """Exact diameter of a connected split graph (0, 1, 2 or 3).

    Distance three happens exactly when two stable vertices have disjoint
    neighborhoods, which is the Disjoint Set kernel's job.
    """
    _check_connected(h)
    if h.n == 1:
        return 0
    if _is_complete(h):
        return 1
    if disjoint_stable_pair(h, kernel=kernel) is not None:
        return 3
    return 2


def _universal_clique_vertex(h: SparseSplit):
    counts = {c: 0 for c in h.clique}
    for nb in h.nbrs:
        for c in nb:
            counts[c] += 1
    for c in h.clique:
        if counts[c] == len(h.stable):
            return c
    return None


def diametral_pair(h: SparseSplit, _trace: list | None = None) -> tuple[int, int, int]:
    """Diametral pair of a connected split Helly graph in O(size) time.

    Diameter two is recognized by a universal vertex; otherwise stable
    vertices are folded in one at a time while the clique partition keeps the
    running neighborhood intersection in front, and the first stable vertex
    whose live degree drops to zero closes a distance-three pair.  Structural
    expectations that only hold for Helly inputs are re-checked on the way
    and raise ClassViolation when they fail.
    """
    _check_connected(h)
    if h.n == 1:
        only = (h.clique or h.stable)[0]
        return only, only, 0
    if _is_complete(h):
        return h.clique[0], h.clique[1] if len(h.clique) > 1 else h.stable[0], 1
    univ = _universal_clique_vertex(h)
    if univ is not None:
        if len(h.stable) >= 2:
            return h.stable[0], h.stable[1], 2
        u = h.stable[0]
        missing = sorted(set(h.clique) - set(h.nbrs[0]))
        if missing:
            return u, missing[0], 2
        raise ClassViolation("universal vertex found but no nonadjacent pair exists")

    # diameter must be 3 now; fold stable vertices in ascending id order
    order = np.argsort(np.asarray(h.stable, dtype=np.int64), kind="stable")
    stable_sorted = [int(h.stable[i]) for i in order]
    nbrs_sorted = [h.nbrs[i] for i in order]
    cs_adj: dict[int, list[int]] = {c: [] for c in h.clique}
    for u, nb in zip(stable_sorted, nbrs_sorted):
        for c in nb:
            cs_adj[c].append(u)
    rem_deg = {u: len(nb) for u, nb in zip(stable_sorted, nbrs_sorted)}
    nbr_of = {u: frozenset(nb) for u, nb in zip(stable_sorted, nbrs_sorted)}

    in_front = {c: True for c in h.clique}
    front = set(h.clique)
    for x, nb in zip(stable_sorted, nbrs_sorted):
        marked = [c for c in nb if in_front[c]]
        if len(marked) == len(front):
            if _trace is not None:
                _trace.append((x, sorted(front)))
            continue
        leaving = front - set(marked)
        for w in sorted(leaving):
            in_front[w] = False
            for u in cs_adj[w]:
                rem_deg[u] -= 1
                if rem_deg[u] == 0 and u != x:
                    if nbr_of[x] & nbr_of[u]:
                        raise ClassViolation(
                            "distance-3 report with a shared neighbor",
                            witness={"pair": (x, u)},
                        )
                    return x, u, 3
        front = set(marked)
        if _trace is not None:
            _trace.append((x, sorted(front)))
        if not front:
            break
    raise ClassViolation(
        "no universal vertex and no disjoint stable pair; split Helly inputs "
        "cannot reach this state",
        witness={"stable": stable_sorted},
    )
