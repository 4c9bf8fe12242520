import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netident import (
    Coloring,
    ForcingChronicle,
    Graph,
    InputError,
    NodeSet,
    derived_set,
    is_zero_forcing_set,
    minimum_zero_forcing_set,
    zfs_heuristic,
)

from oracles import (
    diameter,
    exhaustive_min_zfs,
    is_zfs_naive,
    naive_derived,
    random_graph_edges,
    random_tree_edges,
    shuffled_derived,
)


def path(n):
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def cycle(n):
    return Graph(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def complete(n):
    return Graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def star(leaves):
    return Graph(leaves + 1, [(1, k) for k in range(2, leaves + 2)])


class TestDerivedSet:
    def test_path_endpoint_forces_everything(self):
        derived, chronicle = derived_set(path(4), NodeSet([1]))
        assert derived == NodeSet([1, 2, 3, 4])
        assert chronicle.forces == ((1, 2), (2, 3), (3, 4))

    def test_triangle_single_black_is_stuck(self):
        derived, chronicle = derived_set(complete(3), NodeSet([1]))
        assert derived == NodeSet([1])
        assert chronicle.forces == ()

    def test_path_middle_is_stuck(self):
        # Two white neighbours on both sides: the rule never applies.
        derived, _ = derived_set(path(3), NodeSet([2]))
        assert derived == NodeSet([2])

    def test_empty_seed(self):
        derived, _ = derived_set(path(3), NodeSet())
        assert derived == NodeSet()

    def test_deterministic_smallest_forcer_first(self):
        # Both endpoints can force; node 1 moves first, and after (1,2)
        # the smallest active forcer is 2, not 4.
        _, chronicle = derived_set(path(4), NodeSet([1, 4]))
        assert chronicle.forces == ((1, 2), (2, 3))


class TestIsZeroForcingSet:
    def test_path_cases(self):
        assert not is_zero_forcing_set(path(3), NodeSet([2]))
        assert is_zero_forcing_set(path(3), NodeSet([1]))

    def test_complete_graph_cases(self):
        k4 = complete(4)
        assert is_zfs_naive(4, k4.edges, {1, 2, 3})  # oracle agrees
        assert not is_zfs_naive(4, k4.edges, {1, 2})
        assert is_zero_forcing_set(k4, NodeSet([1, 2, 3]))
        assert not is_zero_forcing_set(k4, NodeSet([1, 2]))

    def test_against_oracle_random(self):
        rng = np.random.default_rng(11)
        for _ in range(120):
            n = int(rng.integers(1, 8))
            edges = random_graph_edges(rng, n)
            g = Graph(n, edges)
            size = int(rng.integers(1, max(2, n // 2 + 1)))
            z = set(rng.choice(np.arange(1, n + 1), size=size, replace=False).tolist())
            derived, _ = derived_set(g, NodeSet(z))
            assert set(derived) == naive_derived(n, edges, z)


class TestChronicle:
    def test_replay_reproduces_derived(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            n = int(rng.integers(2, 10))
            edges = random_graph_edges(rng, n, p=0.5)
            g = Graph(n, edges)
            z = NodeSet(rng.choice(np.arange(1, n + 1), size=2, replace=False).tolist())
            derived, chronicle = derived_set(g, z)
            assert chronicle.replay(g) == derived
            assert chronicle.derived == derived

    def test_replay_rejects_bogus_force(self):
        bad = ForcingChronicle(initial=NodeSet([2]), forces=((2, 1),))
        with pytest.raises(InputError, match="step 1"):
            bad.replay(path(3))  # node 2 has two white neighbours

    def test_json_roundtrip(self):
        _, chronicle = derived_set(path(4), NodeSet([1]))
        again = ForcingChronicle.from_json(chronicle.to_json())
        assert again == chronicle
        assert chronicle.to_json()["derived"] == [1, 2, 3, 4]

    def test_coloring_force_validation(self):
        col = Coloring(path(3), NodeSet([1]))
        assert col.applicable_forces() == [(1, 2)]
        col = col.force(1, 2)
        with pytest.raises(InputError):
            col.force(1, 3)  # 3 is not a neighbour of 1
        assert col.force(2, 3).is_complete()


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 9), seed=st.integers(0, 2**31 - 1))
def test_order_independence(n, seed):
    rng = np.random.default_rng(seed)
    edges = random_graph_edges(rng, n, p=0.45)
    z = set(rng.choice(np.arange(1, n + 1), size=max(1, n // 3), replace=False).tolist())
    reference, _ = derived_set(Graph(n, edges), NodeSet(z))
    for _ in range(10):
        assert shuffled_derived(n, edges, z, rng) == set(reference)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 9), seed=st.integers(0, 2**31 - 1))
def test_monotonicity(n, seed):
    rng = np.random.default_rng(seed)
    g = Graph(n, random_graph_edges(rng, n, p=0.45))
    small = set(rng.choice(np.arange(1, n + 1), size=max(1, n // 3), replace=False).tolist())
    grown = small | {int(rng.integers(1, n + 1))}
    d_small, _ = derived_set(g, NodeSet(small))
    d_grown, _ = derived_set(g, NodeSet(grown))
    assert d_small.issubset(d_grown)


def test_fixpoint_soundness():
    rng = np.random.default_rng(23)
    for _ in range(60):
        n = int(rng.integers(1, 12))
        g = Graph(n, random_graph_edges(rng, n, p=0.4))
        z = NodeSet(rng.choice(np.arange(1, n + 1), size=max(1, n // 2), replace=False).tolist())
        derived, _ = derived_set(g, z)
        blk = set(derived)
        for u in blk:
            whites = [w for w in g.neighbour_ids(u) if w not in blk]
            assert len(whites) != 1


class TestMinimumZfs:
    def test_path_is_one_endpoint(self):
        assert minimum_zero_forcing_set(path(5)) == NodeSet([1])

    def test_cycle_needs_adjacent_pair(self):
        assert minimum_zero_forcing_set(cycle(5)) == NodeSet([1, 2])

    def test_complete_needs_all_but_one(self):
        assert len(minimum_zero_forcing_set(complete(4))) == 3

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(40):
            n = int(rng.integers(1, 8))
            edges = random_graph_edges(rng, n, p=0.4)
            got = minimum_zero_forcing_set(Graph(n, edges))
            assert got.members == exhaustive_min_zfs(n, edges)

    def test_structured_families_vs_oracle(self):
        for n in range(2, 8):
            for g in (path(n), cycle(max(n, 3)), complete(n)):
                got = minimum_zero_forcing_set(g)
                assert got.members == exhaustive_min_zfs(g.n, g.edges)

    def test_minimality_no_smaller_subset(self):
        rng = np.random.default_rng(17)
        from itertools import combinations

        for _ in range(12):
            n = int(rng.integers(4, 13))
            edges = random_graph_edges(rng, n, p=0.35)
            g = Graph(n, edges)
            best = minimum_zero_forcing_set(g)
            assert is_zero_forcing_set(g, best)
            k = len(best)
            if k > 1:
                for cand in combinations(range(1, n + 1), k - 1):
                    assert not is_zfs_naive(n, edges, cand)

    def test_budget_refusal_points_to_heuristic(self):
        g = path(26)
        with pytest.raises(InputError, match="zfs_heuristic"):
            minimum_zero_forcing_set(g)
        assert minimum_zero_forcing_set(g, node_budget=26) == NodeSet([1])

    def test_disconnected_union(self):
        g = Graph(6, [(1, 2), (2, 3), (4, 5), (5, 6), (6, 4)])  # P3 + C3
        assert minimum_zero_forcing_set(g) == NodeSet([1, 4, 5])


class TestHeuristic:
    def test_path(self):
        assert zfs_heuristic(path(5)) == NodeSet([1])

    def test_star_path_cover_branch(self):
        got = zfs_heuristic(star(3))
        assert len(got) == 2
        assert is_zero_forcing_set(star(3), got)
        # exhaustive search confirms 2 is the minimum
        assert len(exhaustive_min_zfs(4, star(3).edges)) == 2

    def test_cycle_respects_diameter_bound(self):
        got = zfs_heuristic(cycle(6))
        assert is_zero_forcing_set(cycle(6), got)
        assert len(got) <= 6 - 3

    def test_always_valid_and_bounded(self):
        rng = np.random.default_rng(29)
        for _ in range(40):
            n = int(rng.integers(2, 24))
            edges = random_graph_edges(rng, n, p=0.3)
            g = Graph(n, edges)
            got = zfs_heuristic(g)
            assert is_zero_forcing_set(g, got)
            if g.is_connected():
                assert len(got) <= n - diameter(n, edges)

    def test_trees_hit_path_cover_minimum(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            n = int(rng.integers(2, 11))
            edges = random_tree_edges(rng, n)
            g = Graph(n, edges)
            got = zfs_heuristic(g)
            assert is_zero_forcing_set(g, got)
            assert len(got) == len(exhaustive_min_zfs(n, edges))

    def test_disconnected_processed_per_component(self):
        g = Graph(7, [(1, 2), (2, 3), (5, 6), (6, 7), (7, 5)])
        got = zfs_heuristic(g)
        assert is_zero_forcing_set(g, got)
        assert 4 in got  # isolated node must seed itself
