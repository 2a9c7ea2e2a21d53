"""Subquadratic radius/diameter machinery for Helly graphs.

The radius test is Las Vegas here: accepts are certified by a verification
sweep and rejects by the sampled-cover containment property, so randomness
only affects running time.  The giant-diameter sampler is Monte Carlo; its
per-trial consistency check turns seed failures into flagged retries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BadEps, ClassViolation, EmptySourceSet, KOutOfRange, PreconditionUnmet
from .graph import Graph, VertexSet, as_members
from .metrics import bfs_distances, distance_rows, require_connected


class NotHellyDetected(ClassViolation):
    """Raised by the optional pre-check when the input fails the Helly oracle."""


@dataclass(frozen=True)
class SampleParams:
    """Knobs for the randomized routines.

    ``c`` oversamples the landmark density; failure probability is driven
    down by independent repetition (``repeats``, default ceil(log2 n) + 3)
    rather than by raising ``c``, since each repetition carries its own
    checkable certificate.
    """

    seed: int
    c: float = 3.0
    eps: float | None = None
    repeats: int | None = None

    def __post_init__(self):
        if self.c < 1:
            raise BadEps("oversampling constant c must be >= 1")
        if self.eps is not None and not 0 < self.eps < 1:
            raise BadEps(f"eps must lie in (0, 1), got {self.eps}")

    def resolved_repeats(self, n: int) -> int:
        if self.repeats is not None:
            return max(1, int(self.repeats))
        return max(1, math.ceil(math.log2(max(2, n)))) + 3

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(int(self.seed))


def _bernoulli_sample(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    return np.flatnonzero(rng.random(n) < p)


def _landmark_maxdist(g: Graph, landmarks: np.ndarray) -> np.ndarray:
    """max over landmarks of dist(u, v); the aggregation is fused into the
    batched BFS so only one small slab is ever live."""
    from .metrics import landmark_max_distances

    return landmark_max_distances(g, landmarks)


class RadiusResult(NamedTuple):
    radius: int
    diam_upper: int
    center: int
    method: str


class PairResult(NamedTuple):
    x: int
    y: int
    distance: int
    exact: bool      # maximality deterministic for the assumed class
    flagged: bool    # an internal consistency check failed; likely a miss
    method: str


@dataclass(frozen=True)
class PartitionState:
    """Groups of the ball-intersection refinement at one level.

    Each group pairs a subset of A with its witness set, the common
    intersection of the k-balls around the group's members; witness sets are
    pairwise disjoint and nonempty.
    """

    level: int
    groups: tuple  # of (members_of_A, witness) id-array pairs


def _level_zero(a_members: np.ndarray) -> list:
    return [(np.array([a], dtype=np.int32), np.array([a], dtype=np.int32)) for a in a_members.tolist()]


def _advance_level(g: Graph, groups: list) -> list:
    """One refinement level: grow witnesses by one hop, then merge groups
    whose grown witnesses share vertices, greedily by maximum coverage."""
    import heapq

    n = g.n
    p = len(groups)
    lab = np.full(n, -1, dtype=np.int64)
    for j, (_, vj) in enumerate(groups):
        lab[vj] = j
    src = np.repeat(np.arange(n, dtype=np.int64), np.diff(g.indptr))
    glab = lab[g.indices]
    keep = glab >= 0
    self_cov = np.flatnonzero(lab >= 0)
    owners = np.concatenate([src[keep], self_cov])
    covered = np.concatenate([glab[keep], lab[self_cov]])
    pairs = np.unique(owners * p + covered)
    cov_x = (pairs // p).astype(np.int64)
    cov_g = (pairs % p).astype(np.int64)
    counts = np.bincount(cov_x, minlength=n)

    if counts.max(initial=0) <= 1:
        # no overlaps: every group keeps its identity, witnesses just grow
        order = np.argsort(cov_g, kind="stable")
        bounds = np.concatenate([[0], np.cumsum(np.bincount(cov_g, minlength=p))])
        mv = cov_x[order]
        return [
            (groups[j][0], mv[bounds[j]:bounds[j + 1]].astype(np.int32))
            for j in range(p)
        ]

    order = np.argsort(cov_g, kind="stable")
    memb_v = cov_x[order]
    memb_ptr = np.concatenate([[0], np.cumsum(np.bincount(cov_g, minlength=p))])
    cov_ptr = np.concatenate([[0], np.cumsum(counts)])

    rem = counts.copy()
    alive = np.ones(p, dtype=bool)
    used = np.zeros(n, dtype=bool)
    heap = [(-int(c), int(x)) for x, c in enumerate(counts) if c > 0]
    heapq.heapify(heap)
    out = []
    while heap:
        negc, x = heapq.heappop(heap)
        if used[x] or rem[x] != -negc or rem[x] <= 0:
            continue
        used[x] = True
        mine = cov_g[cov_ptr[x]:cov_ptr[x + 1]]
        live = mine[alive[mine]]
        cat = np.concatenate([memb_v[memb_ptr[j]:memb_ptr[j + 1]] for j in live.tolist()])
        vals, cnts = np.unique(cat, return_counts=True)
        witness = vals[cnts == len(live)].astype(np.int32)
        merged = np.sort(np.concatenate([groups[j][0] for j in live.tolist()]))
        out.append((merged, witness))
        alive[live] = False
        rem[vals] -= cnts
        pushable = vals[(rem[vals] > 0) & ~used[vals]]
        for v in pushable.tolist():
            heapq.heappush(heap, (-int(rem[v]), v))
    return out


def small_eccentricities(g: Graph, a, k: int) -> tuple[VertexSet, PartitionState]:
    """Vertices whose k-ball covers all of A, via k levels of refinement.

    The returned set is nonempty exactly when the partition collapses to a
    single group, and then equals that group's witness.  Guarantees assume a
    Helly input; on other graphs the output carries no contract.
    """
    require_connected(g)
    members = as_members(a, g.n)
    if members.size == 0:
        raise EmptySourceSet("A must be nonempty")
    if k < 0:
        raise KOutOfRange("k must be >= 0")
    groups = _level_zero(members)
    for _ in range(k):
        if len(groups) == 1:
            # single group: the witness simply grows by one hop per level
            merged, witness = groups[0]
            grown = bfs_distances(g, witness) <= (k - _)
            groups = [(merged, np.flatnonzero(grown).astype(np.int32))]
            break
        groups = _advance_level(g, groups)
    state = PartitionState(level=k, groups=tuple((a_, v_) for a_, v_ in groups))
    if len(groups) == 1:
        return VertexSet(g.n, groups[0][1]), state
    return VertexSet(g.n, []), state


def vertices_ecc_at_most(g: Graph, k: int) -> VertexSet:
    """All vertices of eccentricity at most k (A = V case of the refinement)."""
    b, _ = small_eccentricities(g, np.arange(g.n), k)
    return b


def _ecc_profile(g: Graph, cap: int):
    """Refine with A = V until the partition collapses, up to `cap` levels.

    Returns (r0, center_witness) on collapse, else None.  On a Helly graph
    r0 is the radius and the witness is the center.
    """
    groups = _level_zero(np.arange(g.n, dtype=np.int32))
    if len(groups) == 1:
        return 0, groups[0][1]
    for level in range(1, cap + 1):
        groups = _advance_level(g, groups)
        if len(groups) == 1:
            return level, groups[0][1]
    return None


def dominator_candidates(g: Graph, r: int, params: SampleParams) -> VertexSet:
    """Sampled superset of the vertices whose ball of radius r covers the graph.

    Always contains every vertex of eccentricity <= r; with high probability
    every member's r-ball covers a (1 - eps) fraction of the vertices.  Falls
    back to the exact all-BFS set when the sampling density would reach 1.
    """
    require_connected(g)
    if r < 1:
        raise KOutOfRange("r must be >= 1")
    n = g.n
    eps = params.eps if params.eps is not None else 1.0 / math.sqrt(n)
    if not 0 < eps < 1:
        raise BadEps(f"eps must lie in (0, 1), got {eps}")
    p = params.c * math.log(n) / (eps * n)
    if p >= 1:
        ecc = _landmark_maxdist(g, np.arange(n))
        return VertexSet.from_mask(ecc <= r)
    rng = np.random.Generator(np.random.Philox(params.seed_sequence()))
    for _ in range(8):
        landmarks = _bernoulli_sample(rng, n, p)
        if landmarks.size:
            maxdist = _landmark_maxdist(g, landmarks)
            return VertexSet.from_mask(maxdist <= r)
    ecc = _landmark_maxdist(g, np.arange(n))
    return VertexSet.from_mask(ecc <= r)


def _sweep_accept(g: Graph, r: int, center: int) -> bool:
    """Certify diam <= 2r from `center`: vertices inside its r-ball are
    pairwise within 2r; every vertex left outside is BFS-verified."""
    dist_c = bfs_distances(g, [center])
    outside = np.flatnonzero(dist_c > r)
    for x in outside.tolist():
        if int(bfs_distances(g, [x]).max()) > 2 * r:
            return False
    return True


def accept_radius(g: Graph, r: int, params: SampleParams) -> bool:
    """Accept certifies diam(G) <= 2r; Reject certifies rad(G) > r.

    Both outcomes are deterministic for this implementation: the candidate
    set always contains every vertex of eccentricity <= r, and acceptance is
    re-verified by the final sweep.  Sampling only affects the running time.
    """
    require_connected(g)
    if r < 1:
        raise KOutOfRange("r must be >= 1")
    cand = dominator_candidates(g, r, SampleParams(seed=params.seed, c=params.c))
    if len(cand) == 0:
        return False
    return _sweep_accept(g, r, int(cand.members[0]))


def radius(g: Graph, params: SampleParams, verify_class: bool = False) -> RadiusResult:
    """Radius of a Helly graph plus the derived diameter upper bound 2*rad.

    Dichotomic search over r in [1, n-1] for the smallest accepted radius
    test; on Helly inputs the result is exact (accept/reject are certified),
    and diam lies in {2 rad - 1, 2 rad}.
    """
    require_connected(g)
    if verify_class:
        from .oracles import is_helly_ballfamily

        cert = is_helly_ballfamily(g)
        if not cert.holds:
            raise NotHellyDetected("input failed the ball-Helly oracle", witness=cert.witness)
    n = g.n
    if n == 1:
        return RadiusResult(0, 0, 0, "trivial")
    eps = 1.0 / math.sqrt(n)
    p = params.c * math.log(n) / (eps * n)
    if p >= 1:
        ecc = _landmark_maxdist(g, np.arange(n))
        rad = int(ecc.min())
        return RadiusResult(rad, 2 * rad, int(np.argmin(ecc)), "exact-sweep")
    rng = np.random.Generator(np.random.Philox(params.seed_sequence()))
    landmarks = _bernoulli_sample(rng, n, p)
    while landmarks.size == 0:
        landmarks = _bernoulli_sample(rng, n, p)
    maxdist = _landmark_maxdist(g, landmarks)
    order = np.argsort(maxdist, kind="stable")

    def accept(r: int) -> tuple[bool, int]:
        # chosen candidate is the global argmin of maxdist whenever eligible,
        # which keeps accept(r) monotone in r
        if maxdist[order[0]] > r:
            return False, -1
        c = int(order[0])
        return _sweep_accept(g, r, c), c

    lo, hi = 1, n - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if accept(mid)[0]:
            hi = mid
        else:
            lo = mid + 1
    ok, center = accept(lo)
    if not ok:
        # n - 1 always accepts; reaching here means the search space was off
        raise ClassViolation("radius search failed to certify any r <= n - 1")
    return RadiusResult(lo, 2 * lo, center, "sampled")


def giant_diameter_pair(g: Graph, k: int, params: SampleParams) -> PairResult:
    """Diametral pair for Helly graphs of radius greater than 3k.

    Landmarks within k hops propagate their exact eccentricities; the vertex
    with the largest propagated estimate is, with high probability, a
    diametral end, and one BFS completes the pair.  Each trial checks its own
    estimate against the BFS; inconsistent trials are re-seeded up to the
    repeat budget before giving up.
    """
    require_connected(g)
    if k < 1:
        raise KOutOfRange("k must be >= 1")
    n = g.n
    p = min(1.0, params.c * math.log(n) / k)
    repeats = params.resolved_repeats(n)
    best = None
    trials = 0
    for child in params.seed_sequence().spawn(repeats):
        trials += 1
        rng = np.random.Generator(np.random.Philox(child))
        if p >= 1:
            landmarks = np.arange(n)
        else:
            landmarks = _bernoulli_sample(rng, n, p)
        if landmarks.size == 0:
            continue
        sentinel = np.iinfo(np.int64).max
        est = np.full(n, sentinel, dtype=np.int64)
        chunk = max(1, int(2**24 // max(1, n)))
        for lo in range(0, len(landmarks), chunk):
            rows = distance_rows(g, landmarks[lo:lo + chunk]).astype(np.int64)
            e_u = rows.max(axis=1)
            local = np.where((rows >= 0) & (rows <= k), rows + e_u[:, None], sentinel)
            np.minimum(est, local.min(axis=0), out=est)
        defined = est < sentinel
        if not defined.any():
            continue
        est = np.where(defined, est, 0)  # undefined estimates rank lowest
        est_max = int(est.max())
        x = int(np.argmax(est))
        dist_x = bfs_distances(g, [x])
        e_x = int(dist_x.max())
        y = int(np.argmax(dist_x))
        if best is None or e_x > best.distance:
            best = PairResult(x, y, e_x, exact=False, flagged=True, method="giant-sample")
        if e_x == est_max:
            return PairResult(x, y, e_x, exact=False, flagged=False, method="giant-sample")
    message = (
        f"no consistent trial in {trials} repeats; best certified pair "
        f"({best.x}, {best.y}) at distance {best.distance}"
        if best else f"no usable landmark sample in {trials} repeats"
    )
    exc = PreconditionUnmet(message)
    exc.best = best
    raise exc


def diametral_pair(g: Graph, params: SampleParams) -> PairResult:
    """Diametral pair of a Helly graph.

    Small-diameter graphs are solved exactly through the refinement profile
    (collapse level = radius, then one BFS from the center set); graphs whose
    radius exceeds 6*ceil(sqrt(n)) levels delegate to the landmark sampler.
    """
    require_connected(g)
    n = g.n
    if n == 1:
        return PairResult(0, 0, 0, exact=True, flagged=False, method="trivial")
    k = 6 * math.ceil(math.sqrt(n))
    profile = _ecc_profile(g, cap=min(k, n - 1))
    if profile is not None:
        r0, center = profile
        h = bfs_distances(g, center)
        d = r0 + int(h.max())
        ends = np.flatnonzero(h == h.max())
        x = int(ends[0])
        dist_x = bfs_distances(g, [x])
        y = int(np.argmax(dist_x))
        measured = int(dist_x.max())
        if measured == d:
            return PairResult(x, y, d, exact=True, flagged=False, method="ecc-profile")
        # collapse logic relied on the Helly property; report the real pair
        return PairResult(x, y, measured, exact=False, flagged=True, method="ecc-profile")
    try:
        return giant_diameter_pair(g, math.ceil(math.sqrt(n)), params)
    except PreconditionUnmet as exc:
        x0 = 0
        dist0 = bfs_distances(g, [x0])
        x = int(np.argmax(dist0))
        dist_x = bfs_distances(g, [x])
        return PairResult(x, int(np.argmax(dist_x)), int(dist_x.max()),
                          exact=False, flagged=True, method="giant-sample-fallback")
