"""Tests for the summary saturation, reachability, step graph, and coupled relations."""

import pytest

from stairvpa import (AVOID, SEES, Configuration, ValidationError, classify_word,
                      coupled_relations, reachable, run_word, step_graph, wm_summaries)

import fixtures
import oracles


class TestFlaggedRelation:
    def test_hidden_pattern_examples(self, hidden_pattern):
        fr = wm_summaries(hidden_pattern)
        assert ("q", "qp") in fr.wm_avoid        # c r2: both endpoints non-final
        assert ("q", "qpp") in fr.wm_sees        # c r1 lands in the accepting state
        assert ("q", "q") in fr.wm_avoid and ("qp", "qp") in fr.wm_avoid

    def test_reflexive_base_flags(self, hidden_pattern):
        fr = wm_summaries(hidden_pattern)
        for q in hidden_pattern.states:
            assert (q, q) in fr.wm_reach
            expected = SEES if q in hidden_pattern.accepting_states else AVOID
            assert (q, q) in (fr.wm_sees if expected == SEES else fr.wm_avoid)

    @pytest.mark.parametrize("name,builder", fixtures.SMALL_FIXTURES)
    def test_matches_brute_force(self, name, builder):
        d = builder()
        fr = wm_summaries(d)
        reach, sees, avoid = oracles.brute_flagged_relations(d, max_len=8)
        assert fr.wm_reach == reach
        assert fr.wm_sees == sees
        assert fr.wm_avoid == avoid

    def test_union_invariant(self, strictly_unbounded):
        fr = wm_summaries(strictly_unbounded)
        assert fr.wm_sees | fr.wm_avoid == fr.wm_reach

    @pytest.mark.parametrize("name,builder", fixtures.SMALL_FIXTURES)
    def test_witness_words_replay(self, name, builder):
        d = builder()
        fr = wm_summaries(d)
        for (q, q2) in fr.wm_reach:
            for flag, members in ((SEES, fr.wm_sees), (AVOID, fr.wm_avoid)):
                if (q, q2) not in members:
                    continue
                word = fr.flag_word(q, q2, flag)
                assert classify_word(d.alphabet, word).is_well_matched
                t = run_word(d, Configuration(q), word)
                assert t.death is None
                assert t.final == Configuration(q2)
                assert (t.f_on_step_count >= 1) == (flag == SEES)


class TestReachable:
    def test_two_branch_fully_reachable(self, two_branch_stair):
        assert reachable(two_branch_stair).states == frozenset(two_branch_stair.states)

    def test_isolated_state_excluded(self):
        d = fixtures.stair_buchi(((), (), ("i",)), ("a", "b", "lonely"), "a", (),
                                 {}, {}, {("a", "i"): "b", ("b", "i"): "a"}, {"b"})
        assert reachable(d).states == frozenset({"a", "b"})

    def test_unbounded_both_reachable(self, strictly_unbounded):
        assert reachable(strictly_unbounded).states == frozenset({"rej", "acc"})

    @pytest.mark.parametrize("name,builder", fixtures.SMALL_FIXTURES)
    def test_matches_bounded_exploration(self, name, builder):
        d = builder()
        assert reachable(d).states == frozenset(oracles.brute_reachable_states(d))

    @pytest.mark.parametrize("name,builder", fixtures.SMALL_FIXTURES)
    def test_access_words_replay(self, name, builder):
        d = builder()
        r = reachable(d)
        for state in r.states:
            word = r.access_word(state)
            t = run_word(d, Configuration(d.initial), word)
            assert t.death is None and t.final.state == state


class TestStepGraph:
    def test_two_branch_vertices_and_edges(self, two_branch_stair):
        g = step_graph(two_branch_stair)
        assert set(g.vertices) == {"q0", "q2", "q3", "q4"}
        assert "q1" not in g.vertices
        assert g.edges == frozenset({
            ("q0", "q2"), ("q0", "q4"), ("q2", "q3"), ("q3", "q2"),
            ("q3", "q3"), ("q2", "q2"), ("q4", "q4")})

    def test_internal_only_graph_is_the_transition_graph(self):
        d = fixtures.internal_alternator()
        g = step_graph(d)
        assert set(g.vertices) == {"a", "b"}
        assert g.edges == frozenset({("a", "b"), ("b", "a")})

    def test_requires_stair_kind(self, two_branch_parity):
        with pytest.raises(ValidationError):
            step_graph(two_branch_parity)

    @pytest.mark.parametrize("name,builder", fixtures.SMALL_FIXTURES)
    def test_matches_balanced_run_exploration(self, name, builder):
        d = builder()
        g = step_graph(d)
        pairs = oracles.brute_step_pairs(d, max_len=10)
        assert set(g.edges) == pairs
        touched = {v for e in pairs for v in e}
        assert set(g.vertices) == touched | {d.initial}

    def test_priorities_copied_from_acceptance(self, two_branch_stair):
        g = step_graph(two_branch_stair)
        assert g.vertex_priority == {"q0": 0, "q2": 1, "q3": 0, "q4": 3}


class TestCoupledRelations:
    def test_hidden_pattern_core_example(self, hidden_pattern):
        cr = coupled_relations(hidden_pattern)
        assert ("q", "q", "qpp", "qp") in cr.cud_core[SEES]

    def test_unbounded_core_example(self, strictly_unbounded):
        cr = coupled_relations(strictly_unbounded)
        assert ("rej", "rej", "rej", "rej") in cr.cud_core[SEES]

    def test_no_accepting_states_no_sees(self):
        cr = coupled_relations(fixtures.never_accepting_loop())
        assert not cr.cud_core[SEES] and not cr.cud_full[SEES]

    @pytest.mark.parametrize("name,builder", fixtures.PATTERN_FIXTURES)
    def test_core_contains_brute_force_quads(self, name, builder):
        d = builder()
        cr = coupled_relations(d)
        brute = oracles.brute_core_quads(d, max_u=4, max_z=4)
        assert brute["sees"] <= cr.cud_core[SEES]
        assert brute["avoid"] <= cr.cud_core[AVOID]

    def test_core_subset_of_full(self, hidden_pattern):
        cr = coupled_relations(hidden_pattern)
        assert cr.cud_core[SEES] <= cr.cud_full[SEES]
        assert cr.cud_core[AVOID] <= cr.cud_full[AVOID]

    @pytest.mark.parametrize("name,builder", fixtures.SMALL_FIXTURES)
    def test_core_witnesses_replay(self, name, builder):
        if builder().acceptance.kind != "stair-buchi":
            return
        d = builder()
        cr = coupled_relations(d)
        for flag in (SEES, AVOID):
            for quad in cr.cud_core[flag]:
                q, p, dd, d2 = quad
                u, z, sigma = cr.core_witness(quad, flag)
                assert sigma
                asc = run_word(d, Configuration(q), u)
                assert asc.death is None
                assert asc.final == Configuration(p, sigma)
                assert all(h >= 1 for h in asc.heights[1:])
                assert (asc.f_on_step_count >= 1) == (flag == SEES)
                desc = run_word(d, Configuration(dd, sigma), z)
                assert desc.death is None
                assert desc.final == Configuration(d2)
                assert all(h >= 1 for h in desc.heights[:-1])
                assert classify_word(d.alphabet, u + z).kind == "minimally-well-matched"

    @pytest.mark.parametrize("name,builder", fixtures.PATTERN_FIXTURES)
    def test_full_witnesses_replay(self, name, builder):
        d = builder()
        cr = coupled_relations(d)
        for flag in (SEES, AVOID):
            for quad in cr.cud_full[flag]:
                q, p, dd, d2 = quad
                u, z, sigma = cr.full_witness(quad, flag)
                asc = run_word(d, Configuration(q), u)
                assert asc.death is None and asc.final == Configuration(p, sigma)
                assert (asc.f_on_step_count >= 1) == (flag == SEES)
                desc = run_word(d, Configuration(dd, sigma), z)
                assert desc.death is None and desc.final == Configuration(d2)
