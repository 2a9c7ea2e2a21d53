"""Class recognizers (chordal, split, C4-free, ball-Helly), LexBFS, axiom checks.

The ball-Helly oracle is desk-scale by design: it enumerates vertex triples,
which is fine up to a few hundred vertices but nowhere near linear.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import Disconnected, TooLarge
from .graph import Graph, VertexSet, induced_subgraph
from .metrics import (
    bfs_distances,
    distance_rows,
    eccentricities_bruteforce,
    require_connected,
)

DEFAULT_DESK_BOUND = 512


def desk_bound(override: int | None = None) -> int:
    if override is not None:
        return int(override)
    return int(os.environ.get("GHM_DESK_BOUND", DEFAULT_DESK_BOUND))


@dataclass(frozen=True)
class LexBfsOrder:
    """Visit order of a lexicographic BFS; ``last`` is the final vertex."""

    order: tuple
    last: int


@dataclass(frozen=True)
class ClassCertificate:
    """Outcome of a class recognizer.

    ``label`` is the class name when the test holds, else "none".  The
    witness is a perfect elimination order, a (clique, stable) bipartition,
    or a violating structure, depending on the class.
    """

    klass: str
    holds: bool
    witness: object

    @property
    def label(self) -> str:
        return self.klass if self.holds else "none"


def lexbfs(g: Graph, start: int = 0) -> LexBfsOrder:
    """Lexicographic BFS; among equal labels the lowest vertex id is visited first."""
    require_connected(g)
    g.check_vertex(start)
    order = _lexbfs_order(g, start)
    return LexBfsOrder(order=tuple(order), last=order[-1])


def _lexbfs_order(g: Graph, start: int) -> list[int]:
    # Partition refinement over an ordered sequence of blocks; only the head
    # block is ever consumed, splits insert the marked part before its block.
    n = g.n
    nxt: dict[int, int | None] = {0: None}
    prv: dict[int, int | None] = {0: None}
    members: dict[int, set] = {0: {start}}
    block_of = {start: 0}
    fresh = 1
    head = 0
    rest = set(range(n)) - {start}
    if rest:
        members[fresh] = rest
        nxt[0], prv[fresh], nxt[fresh] = fresh, 0, None
        for v in rest:
            block_of[v] = fresh
        fresh += 1

    visited = [False] * n
    order: list[int] = []
    while head is not None:
        blk = members[head]
        v = min(blk)
        blk.discard(v)
        if not blk:
            q = nxt[head]
            if q is not None:
                prv[q] = None
            del members[head], nxt[head], prv[head]
            head = q
        visited[v] = True
        order.append(v)
        touched: dict[int, list] = {}
        for u in g.neighbors(v).tolist():
            if not visited[u]:
                touched.setdefault(block_of[u], []).append(u)
        for b, items in touched.items():
            if len(items) == len(members[b]):
                continue
            nb = fresh
            fresh += 1
            members[nb] = set(items)
            members[b] -= members[nb]
            for u in items:
                block_of[u] = nb
            p = prv[b]
            prv[nb], nxt[nb] = p, b
            prv[b] = nb
            if p is None:
                head = nb
            else:
                nxt[p] = nb
    return order


def replay_lexbfs(g: Graph, order) -> bool:
    """Label replay: check the order could have been produced by a LexBFS."""
    n = g.n
    pos = {v: i for i, v in enumerate(order)}
    if sorted(order) != list(range(n)):
        return False
    labels = {v: [] for v in range(n)}
    pending = set(range(n))
    for i, v in enumerate(order):
        best = max(labels[u] for u in pending)
        if labels[v] != best:
            return False
        pending.discard(v)
        for u in g.neighbors(v).tolist():
            if u in pending:
                labels[u].append(n - i)
    return True


def _peo_earlier_neighbors(g: Graph, order):
    pos = np.empty(g.n, dtype=np.int64)
    pos[np.asarray(order)] = np.arange(g.n)
    up = []
    for v in range(g.n):
        nb = g.neighbors(v)
        up.append(set(nb[pos[nb] < pos[v]].tolist()))
    return pos, up


def check_peo(g: Graph, order) -> tuple[bool, tuple | None]:
    """Validate reversed(order) as a perfect elimination order.

    Returns (True, None) or (False, (v, p, w)) where p, w are nonadjacent
    neighbors of v that witness the failure.
    """
    pos, up = _peo_earlier_neighbors(g, order)
    for v in order:
        if not up[v]:
            continue
        p = max(up[v], key=lambda u: pos[u])
        missing = (up[v] - {p}) - up[p]
        if missing:
            return False, (v, p, min(missing))
    return True, None


def _chordless_cycle(g: Graph, hint=None) -> list[int] | None:
    """Find an induced cycle of length >= 4, trying the hint triple first."""
    triples = []
    if hint is not None:
        triples.append(hint)
    for v in range(g.n):
        nb = g.neighbors(v).tolist()
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                if not g.has_edge(a, b):
                    triples.append((v, a, b))
    for v, a, b in triples:
        banned = set(g.neighbors(v).tolist()) - {a, b}
        banned.add(v)
        path = _avoiding_path(g, a, b, banned)
        if path is not None and len(path) >= 3:
            return [v] + path
    return None


def _avoiding_path(g: Graph, a, b, banned) -> list[int] | None:
    # Shortest a-b path in G minus `banned`; shortest => induced.
    from collections import deque

    prev = {a: None}
    dq = deque([a])
    while dq:
        x = dq.popleft()
        if x == b:
            break
        for u in g.neighbors(x).tolist():
            if u not in prev and u not in banned:
                prev[u] = x
                dq.append(u)
    if b not in prev:
        return None
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def is_chordal(g: Graph) -> ClassCertificate:
    """Chordality test: LexBFS plus perfect-elimination verification.

    Positive witness: a perfect elimination order (eliminate left to right).
    Negative witness: a chordless cycle of length >= 4.
    """
    order: list[int] = []
    seen = np.zeros(g.n, dtype=bool)
    for s in range(g.n):
        if not seen[s]:
            comp = np.flatnonzero(bfs_distances(g, [s]) >= 0)
            sub, ids = induced_subgraph(g, comp)
            order.extend(ids[list(_lexbfs_order(sub, 0))].tolist())
            seen[comp] = True
    ok, bad = check_peo(g, order)
    if ok:
        return ClassCertificate("chordal", True, witness=list(reversed(order)))
    cycle = _chordless_cycle(g, hint=bad)
    return ClassCertificate("chordal", False, witness=cycle)


def _dense_adj(g: Graph) -> np.ndarray:
    a = np.zeros((g.n, g.n), dtype=bool)
    src = np.repeat(np.arange(g.n), np.diff(g.indptr))
    a[src, g.indices] = True
    return a


def is_c4_free(g: Graph) -> ClassCertificate:
    """Induced-C4 test: a violation is a 4-tuple (u, x, v, y) of a chordless square."""
    a = _dense_adj(g)
    common = (a.astype(np.float32) @ a.astype(np.float32)) >= 2
    np.fill_diagonal(common, False)
    cand = common & ~a
    for u, v in zip(*np.nonzero(np.triu(cand, 1))):
        both = np.flatnonzero(a[u] & a[v])
        sub = a[np.ix_(both, both)]
        np.fill_diagonal(sub, True)
        bad = np.nonzero(~sub)
        if len(bad[0]):
            x, y = both[bad[0][0]], both[bad[1][0]]
            return ClassCertificate("c4free", False, witness=(int(u), int(x), int(v), int(y)))
    return ClassCertificate("c4free", True, witness=None)


def is_split(g: Graph) -> ClassCertificate:
    """Split test by the degree-sequence criterion; witness is the (C, U) bipartition."""
    deg = g.degrees
    order = np.lexsort((np.arange(g.n), -deg))
    d = deg[order]
    q = 0
    for i in range(g.n):
        if d[i] >= i:
            q = i + 1
    lhs = int(d[:q].sum())
    rhs = q * (q - 1) + int(d[q:].sum())
    if lhs != rhs:
        return ClassCertificate("split", False, witness=_split_violation(g))
    clique = sorted(order[:q].tolist())
    stable = sorted(order[q:].tolist())
    assert _replay_split(g, clique, stable), "degree criterion held but partition failed"
    return ClassCertificate("split", True, witness=(clique, stable))


def _replay_split(g: Graph, clique, stable) -> bool:
    cset = set(clique)
    for i, u in enumerate(clique):
        nb = set(g.neighbors(u).tolist())
        if any(v not in nb for v in clique[i + 1:]):
            return False
    return all(cset.issuperset(g.neighbors(u).tolist()) for u in stable)


def _split_violation(g: Graph):
    # An induced 2K2, C4 or C5 witnesses non-splitness.
    cert = is_c4_free(g)
    if not cert.holds:
        u, x, v, y = cert.witness
        return ("C4", (u, x, v, y))
    edges = g.edges().tolist()
    if len(edges) <= 4000:
        for i, (a, b) in enumerate(edges):
            for c, d in edges[i + 1:]:
                if len({a, b, c, d}) == 4 and not (
                    g.has_edge(a, c) or g.has_edge(a, d) or g.has_edge(b, c) or g.has_edge(b, d)
                ):
                    return ("2K2", (a, b, c, d))
        for c5 in _find_c5(g):
            return ("C5", c5)
    return ("degree-criterion", None)


def _find_c5(g: Graph):
    a = _dense_adj(g)
    for v in range(g.n):
        cyc = _chordless_cycle_from(g, a, v, 5)
        if cyc:
            yield tuple(cyc)
            return


def _chordless_cycle_from(g, a, v, length):
    # Tiny backtracking search for an induced cycle of exact `length` through v.
    path = [v]

    def extend():
        if len(path) == length:
            return a[path[-1], path[0]]
        last = path[-1]
        for u in g.neighbors(last).tolist():
            if u in path:
                continue
            if any(a[u, w] for w in path[:-1] if not (len(path) == length - 1 and w == path[0])):
                continue
            path.append(u)
            if extend():
                return True
            path.pop()
        return False

    return path if extend() else None


def ball_masks_minimal(dist: np.ndarray, a: int, b: int) -> np.ndarray:
    """Boolean mask of the common intersection of every ball containing a and b."""
    rv = np.maximum(dist[:, a], dist[:, b])
    return (dist <= rv[:, None]).all(axis=0)


def is_helly_ballfamily(g: Graph, bound: int | None = None) -> ClassCertificate:
    """Desk-scale ball-Helly test via the triple criterion for hypergraphs.

    For every vertex triple, the balls containing at least two of the triple
    must have a common vertex.  The negative witness is a pairwise
    intersecting ball family (center, radius pairs) with empty intersection.
    """
    cap = desk_bound(bound)
    if g.n > cap:
        raise TooLarge(f"ball-Helly oracle capped at n <= {cap} (got n={g.n})")
    require_connected(g)
    n = g.n
    dist = distance_rows(g, range(n))
    # Pack the per-pair minimal intersections as python int bitmasks.
    pair_mask = {}
    weights = 1 << np.arange(n, dtype=object)
    for a in range(n):
        for b in range(a + 1, n):
            m = ball_masks_minimal(dist, a, b)
            pair_mask[(a, b)] = int(np.sum(weights[m]))
    for x in range(n):
        for y in range(x + 1, n):
            mxy = pair_mask[(x, y)]
            for z in range(y + 1, n):
                if mxy & pair_mask[(x, z)] & pair_mask[(y, z)]:
                    continue
                family = _violating_family(dist, (x, y, z))
                return ClassCertificate("helly-ballfamily", False, witness=family)
    return ClassCertificate("helly-ballfamily", True, witness=None)


def _violating_family(dist: np.ndarray, triple) -> list[tuple[int, int]]:
    x, y, z = triple
    n = dist.shape[0]
    balls = []
    for a, b in ((x, y), (x, z), (y, z)):
        rv = np.maximum(dist[:, a], dist[:, b])
        balls.extend((v, int(rv[v])) for v in range(n))
    balls = sorted(set(balls))
    # Greedy pruning toward a small witness family.
    keep = list(balls)
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        if trial and not _family_intersects(dist, trial):
            keep = trial
        else:
            i += 1
    return keep


def _family_intersects(dist, family) -> bool:
    inter = np.ones(dist.shape[0], dtype=bool)
    for v, r in family:
        inter &= dist[v] <= r
        if not inter.any():
            return False
    return True


def replay_helly_witness(g: Graph, family) -> bool:
    """Check a claimed violating family: pairwise intersecting, empty intersection."""
    dist = distance_rows(g, range(g.n))
    masks = [(dist[v] <= r) & (dist[v] >= 0) for v, r in family]
    for i in range(len(masks)):
        for j in range(i + 1, len(masks)):
            if not (masks[i] & masks[j]).any():
                return False
    inter = np.ones(g.n, dtype=bool)
    for m in masks:
        inter &= m
    return not inter.any()


RECOGNIZERS = {
    "chordal": is_chordal,
    "split": is_split,
    "c4free": is_c4_free,
    "helly-ballfamily": is_helly_ballfamily,
}


@dataclass
class AxiomReport:
    """verify_class_axioms outcome: each applicable axiom with pass/fail detail."""

    klass: str
    checks: list = field(default_factory=list)

    def add(self, name, ok, detail=None):
        self.checks.append({"axiom": name, "ok": bool(ok), "detail": detail})

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    @property
    def first_violation(self):
        for c in self.checks:
            if not c["ok"]:
                return c
        return None


def verify_class_axioms(g: Graph, klass: str, bound: int | None = None) -> AxiomReport:
    """Exhaustively check the metric axioms a class membership implies.

    The first check replays the class certificate itself; remaining checks
    depend on the class (unimodal eccentricities and the center-distance
    formula for Helly, convex balls and clique slices when also C4-free).
    """
    cap = desk_bound(bound)
    if g.n > cap:
        raise TooLarge(f"axiom checks capped at n <= {cap} (got n={g.n})")
    report = AxiomReport(klass)
    wants_helly = klass in ("helly-ballfamily", "c4free-helly")
    wants_c4 = klass in ("c4free", "c4free-helly")
    base = {"c4free-helly": ("c4free", "helly-ballfamily")}.get(klass, (klass,))
    for k in base:
        cert = RECOGNIZERS[k](g) if k != "helly-ballfamily" else is_helly_ballfamily(g, bound=cap)
        report.add(f"certificate:{k}", cert.holds, cert.witness if not cert.holds else None)
        if not cert.holds:
            return report
    require_connected(g)
    dist = distance_rows(g, range(g.n))
    ecc = dist.max(axis=1)
    rad, diam = int(ecc.min()), int(ecc.max())
    if wants_helly:
        report.add(
            "unimodal:rad=ceil(diam/2)",
            2 * rad >= diam >= 2 * rad - 1 and rad == -(-diam // 2),
            {"rad": rad, "diam": diam},
        )
        center = np.flatnonzero(ecc == rad)
        dc = dist[center].min(axis=0)
        bad = np.flatnonzero(ecc != dc + rad)
        report.add(
            "ecc-formula:e(v)=dist(v,C)+rad",
            bad.size == 0,
            None if bad.size == 0 else {"vertex": int(bad[0])},
        )
    if wants_c4 and klass == "c4free-helly":
        report.add("balls-convex", *_check_balls_convex(g, dist))
        report.add("slices-cliques", *_check_slices_cliques(g, dist))
    if klass == "split":
        report.add("diam<=3", diam <= 3, {"diam": diam})
    return report


def _check_balls_convex(g: Graph, dist) -> tuple[bool, dict | None]:
    n = g.n
    for x in range(n):
        for y in range(x + 1, n):
            on = dist[x] + dist[y] == dist[x, y]
            hull = dist[:, on].max(axis=1)
            cap = np.maximum(dist[:, x], dist[:, y])
            if (hull > cap).any():
                v = int(np.flatnonzero(hull > cap)[0])
                return False, {"ball_center": v, "pair": (x, y)}
    return True, None


def _check_slices_cliques(g: Graph, dist) -> tuple[bool, dict | None]:
    a = _dense_adj(g)
    n = g.n
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            d = dist[u, v]
            on = dist[u] + dist[v] == d
            for k in range(d + 1):
                sl = np.flatnonzero(on & (dist[u] == k))
                if len(sl) > 1:
                    sub = a[np.ix_(sl, sl)]
                    np.fill_diagonal(sub, True)
                    if not sub.all():
                        return False, {"u": u, "k": int(k), "v": v}
    return True, None
