"""Tests for priority minimization and the stair index computation."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stairvpa import (PriorityGraph, ValidationError, classification_equivalent,
                      compress_labels, diff, min_priorities, stair_index)

import fixtures
import oracles


def graph(vertices, edges, priority):
    return PriorityGraph(tuple(vertices), frozenset(edges), dict(priority))


def random_graph(seed: int, max_vertices: int = 7, max_priority: int = 5):
    rng = random.Random(f"pgraph|{seed}")
    n = rng.randrange(1, max_vertices + 1)
    vertices = [f"v{i}" for i in range(n)]
    edges = set()
    for a in vertices:
        for b in vertices:
            if rng.random() < 0.3:
                edges.add((a, b))
    priority = {v: rng.randrange(0, max_priority + 1) for v in vertices}
    return graph(vertices, edges, priority)


class TestMinPriorities:
    def test_single_odd_loop(self):
        pa = min_priorities(graph(["a"], {("a", "a")}, {"a": 5}))
        assert pa.relabel == {"a": 1} and pa.count == 1

    def test_two_cycle_collapses_to_even(self):
        pa = min_priorities(graph(["a", "b"], {("a", "b"), ("b", "a")}, {"a": 1, "b": 2}))
        assert pa.relabel == {"a": 0, "b": 0} and pa.count == 1

    def test_forced_alternation(self):
        pa = min_priorities(graph(
            ["a", "b"], {("a", "a"), ("b", "b"), ("a", "b"), ("b", "a")},
            {"a": 0, "b": 1}))
        assert pa.relabel == {"a": 0, "b": 1} and pa.count == 2

    def test_cycle_free_graph_uses_one_odd_label(self):
        pa = min_priorities(graph(["a", "b"], {("a", "b")}, {"a": 4, "b": 2}))
        assert pa.count == 1
        assert set(pa.relabel.values()) == {1}

    def test_off_cycle_vertices_take_the_floor(self):
        pa = min_priorities(graph(["a", "b"], {("a", "a")}, {"a": 2, "b": 5}))
        assert pa.relabel["b"] == pa.relabel["a"] == 0

    def test_same_parity_layers_share_a_label(self):
        pa = min_priorities(graph(
            ["a", "b", "c"],
            {("a", "b"), ("b", "a"), ("b", "c"), ("c", "b"), ("c", "c")},
            {"a": 5, "b": 3, "c": 2}))
        assert pa.count == 2

    def test_seeded_graphs_equivalent_and_minimal(self):
        for seed in range(60):
            g = random_graph(seed)
            pa = min_priorities(g)
            assert classification_equivalent(g, g.priority, pa.relabel)
            assert not oracles.exists_smaller_labeling(
                g.vertices, g.edges, g.priority, pa.count)

    def test_relabeling_is_a_fixpoint(self):
        for seed in range(40):
            g = random_graph(seed + 1000)
            pa = min_priorities(g)
            again = min_priorities(graph(g.vertices, g.edges, pa.relabel))
            assert again.count == pa.count


class TestClassificationEquivalent:
    def test_identical_maps(self):
        g = graph(["a"], {("a", "a")}, {"a": 3})
        assert classification_equivalent(g, g.priority, g.priority)

    def test_parity_flip_detected(self):
        g = graph(["a"], {("a", "a")}, {"a": 0})
        assert not classification_equivalent(g, {"a": 0}, {"a": 1})

    def test_two_cycle_even_rewrites_agree(self):
        g = graph(["a", "b"], {("a", "b"), ("b", "a")}, {"a": 1, "b": 2})
        assert classification_equivalent(g, {"a": 1, "b": 2}, {"a": 0, "b": 0})

    def test_size_guard(self):
        vs = [f"v{i}" for i in range(13)]
        g = graph(vs, set(), {v: 0 for v in vs})
        with pytest.raises(ValidationError):
            classification_equivalent(g, g.priority, g.priority)


class TestCompressLabels:
    @given(st.dictionaries(st.sampled_from("abcdef"), st.integers(0, 12), min_size=1))
    @settings(max_examples=80)
    def test_idempotent_and_parity_preserving(self, labels):
        once = compress_labels(labels)
        assert compress_labels(once) == once
        for v in labels:
            assert labels[v] % 2 == once[v] % 2
        for a in labels:
            for b in labels:
                assert (labels[a] <= labels[b]) == (once[a] <= once[b]) or \
                    labels[a] % 2 == labels[b] % 2
        for a in labels:
            for b in labels:
                if labels[a] <= labels[b]:
                    assert once[a] <= once[b]
        assert min(once.values()) in (0, 1)

    def test_collapses_equal_parity_gaps(self):
        assert compress_labels({"a": 0, "b": 2, "c": 5}) == {"a": 0, "b": 0, "c": 1}


class TestStairIndex:
    def test_two_branch_index_is_two(self, two_branch_stair):
        count, relabeled = stair_index(two_branch_stair)
        assert count == 2
        got = relabeled.acceptance.priorities
        assert {q: got[q] for q in ("q0", "q2", "q3", "q4")} == \
            {"q0": 0, "q2": 1, "q3": 0, "q4": 1}

    @pytest.mark.parametrize("junction_priority", [0, 1, 2, 3, 4, 5])
    def test_count_ignores_the_junction_priority(self, junction_priority):
        count, _ = stair_index(fixtures.two_branch("stair-parity", junction_priority))
        assert count == 2

    def test_single_accepting_loop_gets_one_even_label(self):
        count, relabeled = stair_index(fixtures.always_accepting_loop())
        assert count == 1
        assert set(relabeled.acceptance.priorities.values()) == {2} or \
            set(relabeled.acceptance.priorities.values()) == {0}

    def test_relabeled_agrees_on_lassos(self, two_branch_stair):
        _, relabeled = stair_index(two_branch_stair)
        report = diff(two_branch_stair, relabeled, samples=1500, seed=11, max_len=10)
        assert report.mismatches == ()

    def test_stair_buchi_input_becomes_stair_parity(self):
        count, relabeled = stair_index(fixtures.internal_choice())
        assert relabeled.acceptance.kind == "stair-parity"
        assert count == 2
        report = diff(fixtures.internal_choice(), relabeled, samples=1500, seed=3)
        assert report.mismatches == ()

    def test_index_is_stable_under_relabeling(self, two_branch_stair):
        count, relabeled = stair_index(two_branch_stair)
        count2, _ = stair_index(relabeled)
        assert count2 == count
