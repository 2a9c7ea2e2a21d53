import math

import numpy as np
import pytest

from ghm import eccentricities_bruteforce
from ghm.errors import BadEps, Disconnected, EmptySourceSet, PreconditionUnmet
from ghm.generators import (
    fixture,
    king_graph,
    path_graph,
    random_chordal,
    tree,
)
from ghm.graph import Graph
from ghm.helly import (
    PairResult,
    SampleParams,
    accept_radius,
    diametral_pair,
    dominator_candidates,
    giant_diameter_pair,
    radius,
    small_eccentricities,
    vertices_ecc_at_most,
)
from ghm.metrics import distance_rows
from ghm.oracles import is_helly_ballfamily


PARAMS = SampleParams(seed=1)


class TestDominatorCandidates:
    def test_p5_r4_everything(self, p5):
        assert dominator_candidates(p5, 4, PARAMS) == {0, 1, 2, 3, 4}

    def test_p5_r1_empty(self, p5):
        assert len(dominator_candidates(p5, 1, PARAMS)) == 0

    def test_contains_center_always(self):
        # the covering property is deterministic: D always contains every
        # vertex of eccentricity <= r
        for seed in range(1, 30):
            g = tree(240, seed=seed)
            t = eccentricities_bruteforce(g)
            d = dominator_candidates(g, t.radius, SampleParams(seed=seed))
            assert set(t.center) <= set(d)

    def test_bad_eps(self, p5):
        with pytest.raises(BadEps):
            dominator_candidates(p5, 2, SampleParams(seed=1, eps=1.5))

    def test_disconnected(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(Disconnected):
            dominator_candidates(g, 1, PARAMS)


class TestAcceptRadius:
    def test_p5(self, p5):
        assert accept_radius(p5, 2, PARAMS) is True
        assert accept_radius(p5, 1, PARAMS) is False

    def test_k4(self, k4):
        assert accept_radius(k4, 1, PARAMS) is True

    def test_accept_iff_diam_at_most_2r(self):
        # accept/reject are certificates in both directions here
        for seed in range(8):
            g = random_chordal(70, seed=seed)
            t = eccentricities_bruteforce(g)
            for r in range(1, t.diameter + 2):
                assert accept_radius(g, r, SampleParams(seed=seed)) == (t.diameter <= 2 * r)


class TestHellyRadius:
    def test_fixtures(self, p5, star4, king33):
        assert radius(p5, PARAMS)[:2] == (2, 4)
        assert radius(star4, PARAMS)[:2] == (1, 2)
        assert radius(king33, PARAMS)[:2] == (1, 2)

    @pytest.mark.parametrize("seed", range(1, 13))
    def test_matches_bruteforce_sampled_path(self, seed):
        # sizes beyond the exact-fallback threshold exercise the landmark path
        g = tree(700 + 40 * seed, seed=seed)
        t = eccentricities_bruteforce(g)
        res = radius(g, SampleParams(seed=seed))
        assert res.method == "sampled"
        assert res.radius == t.radius
        assert res.diam_upper == 2 * t.radius
        assert t.diameter in (2 * res.radius - 1, 2 * res.radius)

    def test_king_strip(self):
        g = king_graph(2, 50)
        t = eccentricities_bruteforce(g)
        assert radius(g, PARAMS).radius == t.radius

    def test_unimodality_on_certified_corpus(self):
        for seed in range(4):
            g = king_graph(3 + seed, 4 + seed)
            t = eccentricities_bruteforce(g)
            assert t.radius == -(-t.diameter // 2)


class TestSmallEccentricities:
    def test_k0_singletons(self, p5):
        b, state = small_eccentricities(p5, range(5), 0)
        assert len(b) == 0
        assert len(state.groups) == 5

    def test_k2_full(self, p5):
        b, _ = small_eccentricities(p5, range(5), 2)
        assert b == {2}

    def test_k2_two_sources(self, p5):
        b, _ = small_eccentricities(p5, [0, 4], 2)
        assert b == {2}

    def test_empty_a(self, p5):
        with pytest.raises(EmptySourceSet):
            small_eccentricities(p5, [], 1)

    def test_partition_invariants_desk_scale(self):
        # groups partition A; witnesses disjoint, nonempty, and equal to the
        # exact ball intersections
        rng = np.random.default_rng(0)
        cases = [fixture("P5"), fixture("STAR4"), king_graph(3, 4),
                 tree(48, seed=2)] + [g for _, g in
                                      __import__("ghm.generators", fromlist=["x"]).chordal_helly_instances(6, n_range=(8, 40), seed=5)]
        for g in cases:
            rows = distance_rows(g, range(g.n))
            diam = rows.max()
            subsets = [np.arange(g.n), rng.choice(g.n, size=max(1, g.n // 2), replace=False)]
            subsets.append(np.array([0]))
            for a in subsets:
                a = np.unique(a)
                for k in range(0, min(diam, 6) + 1):
                    _, state = small_eccentricities(g, a, k)
                    union = sorted(int(x) for grp, _ in state.groups for x in grp)
                    assert union == sorted(a.tolist())
                    wit_all = [w for _, wit in state.groups for w in wit.tolist()]
                    assert len(wit_all) == len(set(wit_all)), "witnesses overlap"
                    for grp, wit in state.groups:
                        exact = np.flatnonzero((rows[grp] <= k).all(axis=0))
                        assert wit.tolist() == exact.tolist()
                        assert len(wit) > 0

    def test_matches_bruteforce_on_helly_corpus(self):
        from ghm.generators import chordal_helly_instances

        rng = np.random.default_rng(3)
        for name, g in chordal_helly_instances(8, n_range=(8, 64), seed=21):
            rows = distance_rows(g, range(g.n))
            diam = rows.max()
            for a in (np.arange(g.n), rng.choice(g.n, size=g.n // 2 + 1, replace=False)):
                a = np.unique(a)
                for k in range(0, diam + 1):
                    b, _ = small_eccentricities(g, a, k)
                    expect = np.flatnonzero((rows[np.asarray(a)] <= k).all(axis=0))
                    assert b.members.tolist() == expect.tolist(), (name, k)


class TestVerticesEccAtMost:
    def test_p5(self, p5):
        assert vertices_ecc_at_most(p5, 3) == {1, 2, 3}
        assert vertices_ecc_at_most(p5, 4) == {0, 1, 2, 3, 4}

    def test_king33_center(self, king33):
        assert vertices_ecc_at_most(king33, 1) == {4}

    def test_monotone_bk(self):
        g = tree(120, seed=6)
        t = eccentricities_bruteforce(g)
        prev = set()
        for k in range(t.radius, t.diameter + 1):
            cur = set(vertices_ecc_at_most(g, k))
            assert prev <= cur
            assert cur == {int(v) for v in np.flatnonzero(t.ecc <= k)}
            prev = cur


class TestGiantDiameterPair:
    def test_p100_exact_fallback_regime(self):
        # at this size the landmark density reaches one, so every seed is exact
        g = path_graph(100)
        for seed in range(1, 101):
            res = giant_diameter_pair(g, 8, SampleParams(seed=seed))
            assert res.distance == 99
            assert {res.x, res.y} == {0, 99}

    def test_sampled_regime_success_rate(self):
        g = path_graph(900)
        t = eccentricities_bruteforce(g)
        good = 0
        for seed in range(1, 201):
            res = giant_diameter_pair(g, 30, SampleParams(seed=seed))
            assert res.distance <= t.diameter  # output is a real pair
            good += res.distance == t.diameter
        assert good >= 199

    def test_king_strip_sampled(self):
        g = king_graph(2, 450)
        t = eccentricities_bruteforce(g)
        good = 0
        for seed in range(1, 51):
            res = giant_diameter_pair(g, 30, SampleParams(seed=seed))
            assert res.distance <= t.diameter
            good += res.distance == t.diameter
        assert good >= 49

    def test_estimates_never_undershoot_true_ecc(self):
        # the propagated estimate for each vertex upper-bounds its
        # eccentricity, so the certified output can never exceed the diameter
        g = path_graph(400)
        res = giant_diameter_pair(g, 20, SampleParams(seed=3))
        t = eccentricities_bruteforce(g)
        assert res.distance <= t.diameter


class TestHellyDiametralPair:
    def test_fixtures(self, p5, k4, king33):
        assert diametral_pair(p5, PARAMS)[:3] == (0, 4, 4)
        assert diametral_pair(k4, PARAMS).distance == 1
        assert diametral_pair(king33, PARAMS).distance == 2

    @pytest.mark.parametrize("seed", range(1, 9))
    def test_trees_exact(self, seed):
        g = tree(400 + 100 * seed, seed=seed)
        t = eccentricities_bruteforce(g)
        res = diametral_pair(g, SampleParams(seed=seed))
        assert res.distance == t.diameter
        assert res.exact

    def test_long_path_giant_branch(self):
        g = path_graph(1200)
        res = diametral_pair(g, PARAMS)
        assert res.method.startswith("giant")
        assert res.distance == 1199

    def test_unimodality_link(self):
        for seed in (2, 5):
            g = tree(300, seed=seed)
            r = radius(g, SampleParams(seed=seed)).radius
            d = diametral_pair(g, SampleParams(seed=seed)).distance
            assert r == -(-d // 2)
