import numpy as np
import pytest

from ghm import Graph, eccentricities_bruteforce
from ghm.errors import ClassViolation, Disconnected, GraphFormatError
from ghm.generators import fixture, random_split_helly, split_helly_corpus
from ghm.split import (
    SetFamily,
    SparseSplit,
    diametral_pair,
    disjoint_set_bitpacked,
    disjoint_set_naive,
    read_sparse_split,
    split_diameter,
    write_sparse_split,
)


def split_h2():
    return SparseSplit((0, 1, 2), (3, 4), ((0,), (1,)))


class TestSparseSplit:
    def test_from_graph_roundtrip(self):
        g = fixture("SPLIT-H2")
        h = SparseSplit.from_graph(g)
        assert sorted(h.clique) == [0, 1, 2]
        assert sorted(h.stable) == [3, 4]
        back, _ = h.to_graph()
        assert back == g

    def test_size_is_stable_degree_sum(self):
        assert split_h2().size == 2

    def test_validation(self):
        with pytest.raises(GraphFormatError):
            SparseSplit((0, 1), (1,), ((0,),))
        with pytest.raises(GraphFormatError):
            SparseSplit((0,), (1,), ((2,),))

    def test_file_roundtrip(self):
        h = split_h2()
        assert read_sparse_split(write_sparse_split(h)) == h

    def test_file_error_line(self):
        with pytest.raises(GraphFormatError) as err:
            read_sparse_split("1 1\n0\nbad line\n")
        assert err.value.line == 3


class TestDisjointSetKernels:
    def test_examples(self):
        fam = SetFamily(5, ((1, 2), (2, 3), (4,)))
        assert disjoint_set_naive(fam) == (0, 2)
        assert disjoint_set_bitpacked(fam) == (0, 2)
        shared = SetFamily(4, ((0, 1), (0, 2), (0, 3)))
        assert disjoint_set_naive(shared) is None
        assert disjoint_set_bitpacked(shared) is None

    def test_kernel_equivalence_bulk(self):
        rng = np.random.default_rng(0)
        for trial in range(10_000):
            ground = int(rng.integers(1, 80))
            k = int(rng.integers(1, 12))
            sets = tuple(
                tuple(np.unique(rng.integers(0, ground, size=rng.integers(1, 6))).tolist())
                for _ in range(k)
            )
            fam = SetFamily(ground, sets)
            a = disjoint_set_naive(fam)
            b = disjoint_set_bitpacked(fam)
            assert (a is None) == (b is None)
            if b is not None:
                i, j = b
                assert not set(sets[i]) & set(sets[j])


class TestSplitDiameter:
    def test_split_h2(self):
        assert split_diameter(split_h2()) == 3

    def test_k1(self):
        assert split_diameter(SparseSplit((0,), (), ())) == 0
        assert split_diameter(SparseSplit((), (7,), ((),))) == 0

    def test_universal_vertex_two_stables(self):
        h = SparseSplit((0, 1), (2, 3), ((0, 1), (0, 1)))
        assert split_diameter(h) == 2

    def test_complete(self):
        assert split_diameter(SparseSplit((0, 1, 2), (), ())) == 1

    def test_disconnected(self):
        with pytest.raises(Disconnected):
            split_diameter(SparseSplit((0,), (1,), ((),)))

    def test_kernels_agree_on_graphs(self):
        for name, g in split_helly_corpus(seed=3)[:12]:
            h = SparseSplit.from_graph(g)
            assert split_diameter(h, "naive") == split_diameter(h, "packed")


class TestSplitHellyDiametralPair:
    def test_split_h2_pair(self):
        assert diametral_pair(split_h2()) == (3, 4, 3)

    def test_clique_only(self):
        x, y, d = diametral_pair(SparseSplit((0, 1, 2, 3), (), ()))
        assert d == 1 and x != y

    def test_universal_vertex_case(self):
        h = SparseSplit((0, 1), (2, 3), ((0, 1), (0,)))
        x, y, d = diametral_pair(h)
        assert d == 2 and {x, y} == {2, 3}

    def test_matches_bruteforce_on_certified_corpus(self):
        for name, g in split_helly_corpus(seed=13):
            h = SparseSplit.from_graph(g)
            x, y, d = diametral_pair(h)
            t = eccentricities_bruteforce(g)
            assert d == t.diameter, name
            if d > 0:
                real = eccentricities_bruteforce(g).ecc  # noqa: F841
                gg, new = h.to_graph()
                from ghm.metrics import bfs_distances

                assert int(bfs_distances(gg, [new[x]])[new[y]]) == d, name

    def test_refinement_front_is_running_intersection(self):
        # exhaustive on the small certified corpus: after folding x_1..x_i the
        # front equals the intersection of their neighborhoods
        for name, g in split_helly_corpus(seed=13):
            if g.n > 64:
                continue
            h = SparseSplit.from_graph(g)
            if len(h.stable) < 2:
                continue
            trace = []
            try:
                diametral_pair(h, _trace=trace)
            except ClassViolation:
                continue
            running = set(h.clique)
            order = sorted(h.stable)
            nbr = {u: set(nb) for u, nb in zip(h.stable, h.nbrs)}
            for x, front in trace:
                idx = order.index(x)
                expect = set(h.clique)
                for u in order[: idx + 1]:
                    expect &= nbr[u]
                assert set(front) == expect, name

    def test_reported_pair_has_disjoint_neighborhoods(self):
        # stopping soundness, re-checked on the full graph
        for name, g in split_helly_corpus(seed=29)[:20]:
            h = SparseSplit.from_graph(g)
            x, y, d = diametral_pair(h)
            if d == 3:
                sx = set(g.neighbors(x).tolist())
                sy = set(g.neighbors(y).tolist())
                assert not sx & sy, name

    def test_class_violation_on_shared_neighbor_lie(self):
        # split but not Helly around the critical step: C4-as-split is
        # impossible, so force the check through a crafted instance whose
        # refinement fires although the pair shares a neighbor elsewhere
        h = SparseSplit((0, 1, 2, 3), (4, 5, 6), ((0, 1), (2, 3), (1, 2)))
        x, y, d = diametral_pair(h)
        g, new = h.to_graph()
        t = eccentricities_bruteforce(g)
        assert d == t.diameter == 3


class TestGeneratorCorpus:
    def test_generator_instances_certified(self):
        g = random_split_helly(20, seed=5)
        from ghm.oracles import is_helly_ballfamily, is_split

        assert is_split(g).holds and is_helly_ballfamily(g).holds
