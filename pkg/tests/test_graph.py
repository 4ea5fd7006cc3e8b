import json

import numpy as np
import pytest

from wta import (
    connected_components,
    dump_graph,
    graph_from_json_dict,
    graph_to_json_dict,
    induced_subgraph,
    is_independent_set,
    load_graph,
    new_graph,
    random_graph,
)
from wta.errors import (
    ConfigError,
    DuplicateEdgeError,
    IndexOutOfRangeError,
    InvalidProbabilityError,
    NonpositiveWeightError,
    SelfLoopError,
)


def path3():
    return new_graph(3, [(0, 1, 1.0), (1, 2, 1.0)])


def triangle():
    return new_graph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


class TestConstruction:
    def test_single_edge(self):
        g = new_graph(2, [(0, 1, 1.0)])
        assert g.weights[0, 1] == 1.0
        assert g.weights[1, 0] == 1.0
        assert g.weights[0, 0] == 0.0 and g.weights[1, 1] == 0.0

    def test_empty_graph(self):
        g = new_graph(3, [])
        assert not g.weights.any()
        assert g.num_edges == 0

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoopError):
            new_graph(3, [(0, 0, 1.0)])

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(NonpositiveWeightError):
            new_graph(2, [(0, 1, 0.0)])
        with pytest.raises(NonpositiveWeightError):
            new_graph(2, [(0, 1, -2.0)])

    def test_conflicting_duplicate_rejected(self):
        with pytest.raises(DuplicateEdgeError):
            new_graph(2, [(0, 1, 1.0), (1, 0, 2.0)])
        # identical re-specification is tolerated
        g = new_graph(2, [(0, 1, 1.0), (1, 0, 1.0)])
        assert g.num_edges == 1

    def test_out_of_range_rejected(self):
        with pytest.raises(IndexOutOfRangeError):
            new_graph(2, [(0, 2, 1.0)])

    def test_matrix_and_adjacency_agree(self):
        rng = np.random.default_rng(3)
        for trial in range(20):
            g = random_graph(8, 0.5, ("uniform", 0.1, 2.0), seed=trial)
            for i in range(g.n):
                nbrs = dict(g.neighbors(i))
                for j in range(g.n):
                    assert nbrs.get(j, 0.0) == g.weights[i, j]
            assert np.array_equal(g.weights, g.weights.T)


class TestInducedSubgraph:
    def test_endpoints_must_both_lie_inside(self):
        sub, mapping = induced_subgraph(path3(), [0, 2])
        assert mapping == (0, 2)
        assert sub.num_edges == 0

    def test_identity(self):
        g = triangle()
        sub, mapping = induced_subgraph(g, range(3))
        assert mapping == (0, 1, 2)
        assert np.array_equal(sub.weights, g.weights)

    def test_keeps_internal_edge_and_weight(self):
        g = new_graph(3, [(0, 1, 1.0), (1, 2, 2.5), (0, 2, 1.0)])
        sub, mapping = induced_subgraph(g, [1, 2])
        assert mapping == (1, 2)
        assert sub.weights[0, 1] == 2.5

    def test_composition(self):
        rng = np.random.default_rng(11)
        for trial in range(20):
            g = random_graph(10, 0.4, "unit", seed=trial)
            s1 = sorted(rng.choice(10, size=7, replace=False).tolist())
            s2_local = sorted(rng.choice(7, size=4, replace=False).tolist())
            sub1, map1 = induced_subgraph(g, s1)
            sub12, map12 = induced_subgraph(sub1, s2_local)
            s_direct = [map1[i] for i in s2_local]
            direct, map_d = induced_subgraph(g, s_direct)
            assert map_d == tuple(sorted(s_direct))
            assert np.array_equal(sub12.weights, direct.weights)


class TestComponents:
    def test_connected_path(self):
        assert connected_components(path3()) == [(0, 1, 2)]

    def test_isolated_nodes(self):
        assert connected_components(new_graph(3, [])) == [(0,), (1,), (2,)]

    def test_two_pairs(self):
        g = new_graph(4, [(0, 1, 1.0), (2, 3, 1.0)])
        assert connected_components(g) == [(0, 1), (2, 3)]

    def test_partition_against_bfs_oracle(self):
        for trial in range(25):
            g = random_graph(12, 0.18, "unit", seed=trial)
            comps = connected_components(g)
            # partition: disjoint and covering
            flat = [i for c in comps for i in c]
            assert sorted(flat) == list(range(g.n))
            # oracle: naive reachability by matrix powers
            reach = (g.weights > 0).astype(int) + np.eye(g.n, dtype=int)
            closure = np.linalg.matrix_power(reach, g.n) > 0
            for comp in comps:
                for i in comp:
                    assert set(np.nonzero(closure[i])[0].tolist()) == set(comp)
            # no positive edge between distinct components
            label = {}
            for k, comp in enumerate(comps):
                for i in comp:
                    label[i] = k
            for i, j, _w in g.edges():
                assert label[i] == label[j]


class TestIndependentSet:
    def test_path_ends(self):
        assert is_independent_set(path3(), [0, 2])

    def test_adjacent_pair(self):
        assert not is_independent_set(path3(), [0, 1])

    def test_empty_set_vacuous(self):
        assert is_independent_set(triangle(), [])


class TestRandomGraph:
    def test_p_zero_empty(self):
        assert random_graph(6, 0.0, "unit", seed=9).num_edges == 0

    def test_p_one_complete_unit(self):
        g = random_graph(4, 1.0, "unit", seed=1)
        expect = np.ones((4, 4)) - np.eye(4)
        assert np.array_equal(g.weights, expect)

    def test_determinism(self):
        a = random_graph(10, 0.5, ("uniform", 0.5, 1.5), seed=42)
        b = random_graph(10, 0.5, ("uniform", 0.5, 1.5), seed=42)
        assert np.array_equal(a.weights, b.weights)
        assert a.hash_hex == b.hash_hex

    def test_bad_probability(self):
        with pytest.raises(InvalidProbabilityError):
            random_graph(3, 1.5, "unit", seed=0)


class TestJson:
    def test_round_trip(self, tmp_path):
        g = new_graph(4, [(0, 1, 1.0), (1, 3, 0.25)])
        path = tmp_path / "g.json"
        dump_graph(g, path)
        h = load_graph(path)
        assert np.array_equal(g.weights, h.weights)

    def test_schema_requires_i_less_than_j(self):
        with pytest.raises(ConfigError):
            graph_from_json_dict({"n": 2, "edges": [[1, 0, 1.0]]})

    def test_schema_error_taxonomy_matches_new_graph(self):
        with pytest.raises(SelfLoopError):
            graph_from_json_dict({"n": 2, "edges": [[1, 1, 1.0]]})
        with pytest.raises(NonpositiveWeightError):
            graph_from_json_dict({"n": 2, "edges": [[0, 1, -1.0]]})
        with pytest.raises(IndexOutOfRangeError):
            graph_from_json_dict({"n": 2, "edges": [[0, 5, 1.0]]})

    def test_dump_emits_sorted_edges(self, tmp_path):
        g = new_graph(3, [(1, 2, 2.0), (0, 1, 1.0)])
        d = graph_to_json_dict(g)
        assert d == {"n": 3, "edges": [[0, 1, 1.0], [1, 2, 2.0]]}
        path = tmp_path / "g.json"
        dump_graph(g, path)
        assert json.loads(path.read_text()) == d
