import numpy as np
import pytest

from ghm import (
    Graph,
    VertexSet,
    ball,
    bfs,
    eccentricities_bruteforce,
    projection,
    read_edgelist,
    slice_set,
    write_edgelist,
)
from ghm.errors import (
    Disconnected,
    EmptySourceSet,
    GraphFormatError,
    KOutOfRange,
    VertexOutOfRange,
)
from ghm.generators import fixture, king_graph, random_chordal, tree
from ghm.metrics import bfs_distances, distance_rows, scipy_distance_rows

from .conftest import dict_bfs


class TestGraphStructure:
    def test_adjacency_sorted_symmetric(self, sun3):
        for v in range(sun3.n):
            nb = sun3.neighbors(v)
            assert list(nb) == sorted(nb)
            for u in nb.tolist():
                assert sun3.has_edge(u, v)

    def test_rejects_self_loop(self):
        with pytest.raises(GraphFormatError):
            Graph.from_edges(3, [(0, 0)])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(GraphFormatError):
            Graph.from_edges(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            Graph.from_edges(3, [(0, 5)])

    def test_vertex_set_views_agree(self):
        s = VertexSet(10, [3, 7, 1, 7])
        assert list(s) == [1, 3, 7]
        assert np.flatnonzero(s.mask).tolist() == [1, 3, 7]
        assert 7 in s and 2 not in s


class TestBfs:
    def test_p5_single_source(self, p5):
        assert bfs(p5, [0]).dist.tolist() == [0, 1, 2, 3, 4]

    def test_p5_two_sources(self, p5):
        assert bfs(p5, [0, 4]).dist.tolist() == [0, 1, 2, 1, 0]

    def test_c4_single_source(self, c4):
        assert bfs(c4, [0]).dist.tolist() == [0, 1, 2, 1]

    def test_empty_sources_rejected(self, p5):
        with pytest.raises(EmptySourceSet):
            bfs(p5, [])

    def test_source_out_of_range(self, p5):
        with pytest.raises(VertexOutOfRange):
            bfs(p5, [9])

    def test_unreachable_flagged(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        assert bfs(g, [0]).dist.tolist() == [0, 1, -1, -1]

    @pytest.mark.parametrize("seed", range(6))
    def test_engines_agree_random(self, seed):
        g = random_chordal(60, seed=seed) if seed % 2 else tree(80, seed=seed)
        rows = distance_rows(g, range(g.n), batch=7)
        alt = scipy_distance_rows(g, range(g.n))
        assert np.array_equal(rows, alt)
        ref = np.vstack([dict_bfs(g, [v]) for v in range(g.n)])
        assert np.array_equal(rows, ref)

    def test_triangle_inequality_sampled(self):
        rng = np.random.default_rng(0)
        for seed in range(4):
            g = random_chordal(50, seed=seed)
            d = distance_rows(g, range(g.n))
            for _ in range(200):
                x, y, z = rng.integers(0, g.n, size=3)
                assert d[x, z] <= d[x, y] + d[y, z]


class TestBruteForceEccentricities:
    def test_p5(self, p5):
        t = eccentricities_bruteforce(p5)
        assert t.ecc.tolist() == [4, 3, 2, 3, 4]
        assert (t.radius, t.diameter) == (2, 4)
        assert t.center == {2}
        x, y = t.diametral_pair
        assert bfs(p5, [x]).dist[y] == 4

    def test_star4(self, star4):
        t = eccentricities_bruteforce(star4)
        assert t.ecc.tolist() == [1, 2, 2, 2, 2]
        assert (t.radius, t.diameter) == (1, 2)

    def test_k4(self, k4):
        t = eccentricities_bruteforce(k4)
        assert t.ecc.tolist() == [1, 1, 1, 1]
        assert t.radius == t.diameter == 1

    def test_disconnected_rejected(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(Disconnected):
            eccentricities_bruteforce(g)


class TestBallSliceProjection:
    def test_ball_examples(self, p5, c4):
        assert ball(p5, 2, 1) == {1, 2, 3}
        assert ball(p5, 0, 0) == {0}
        assert ball(c4, 0, 2) == {0, 1, 2, 3}

    def test_ball_negative_radius(self, p5):
        with pytest.raises(KOutOfRange):
            ball(p5, 0, -1)

    def test_slice_examples(self, p5, c4, k4):
        assert slice_set(p5, 0, 2, 4) == {2}
        assert slice_set(c4, 0, 1, 2) == {1, 3}
        assert slice_set(k4, 0, 0, 1) == {0}

    def test_slice_k_out_of_range(self, p5):
        with pytest.raises(KOutOfRange):
            slice_set(p5, 0, 5, 4)

    def test_slice_disconnected_pair(self):
        g = Graph.from_edges(4, [(0, 1), (2, 3)])
        with pytest.raises(Disconnected):
            slice_set(g, 0, 1, 3)

    def test_projection_examples(self, p5, c4):
        assert projection(p5, 4, [1, 2]) == (2, {2})
        assert projection(p5, 2, [2]) == (0, {2})
        assert projection(c4, 2, [0]) == (2, {0})

    def test_projection_empty_set(self, p5):
        with pytest.raises(EmptySourceSet):
            projection(p5, 0, [])

    def test_ball_covers_graph_at_eccentricity(self):
        for g in (fixture("P5"), fixture("SUN3"), king_graph(4, 4), random_chordal(40, 3)):
            t = eccentricities_bruteforce(g)
            for v in range(g.n):
                assert len(ball(g, v, int(t.ecc[v]))) == g.n
                if t.ecc[v] > 0:
                    assert len(ball(g, v, int(t.ecc[v]) - 1)) < g.n

    def test_slice_inside_both_balls(self):
        g = random_chordal(40, seed=2)
        d = distance_rows(g, range(g.n))
        rng = np.random.default_rng(1)
        for _ in range(60):
            u, v = rng.integers(0, g.n, size=2)
            duv = int(d[u, v])
            k = int(rng.integers(0, duv + 1))
            sl = slice_set(g, int(u), k, int(v))
            for w in sl:
                assert d[u, w] == k and d[v, w] == duv - k


class TestEdgelistFormat:
    def test_roundtrip(self, sun3):
        assert read_edgelist(write_edgelist(sun3)) == sun3

    def test_comments_and_blanks(self):
        text = "# header\n3 2\n\n0 1  # an edge\n1 2\n"
        g = read_edgelist(text)
        assert (g.n, g.m) == (3, 2)

    def test_error_carries_line_number(self):
        with pytest.raises(GraphFormatError) as err:
            read_edgelist("3 1\n0 x\n")
        assert err.value.line == 2

    def test_wrong_edge_count(self):
        with pytest.raises(GraphFormatError):
            read_edgelist("3 2\n0 1\n")
