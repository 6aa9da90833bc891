from __future__ import annotations

import numpy as np
import pytest

from fairdsg.graph import Coloring, LabeledGraph, density
from fairdsg.planted import PlantedParams, generate
from fairdsg.spectral import (AdjacencyOperator, ProjectedOperator,
                              dominant_eigenpair, fairness_vector)
from fairdsg.sweep import (ALL_ORDERINGS, Ordering, SolveStatus, SweepConfig,
                           candidate_trace, general_sweep, ordering_permutation,
                           paired_sweep, run_algorithm)

from conftest import random_coloring, random_graph
from oracles import pair_rescan, subset_density, sweep_rescan, dense_adjacency


def _eigvec(g, c, projected):
    if projected:
        op = ProjectedOperator(g, fairness_vector(c))
    else:
        op = AdjacencyOperator(g)
    return dominant_eigenpair(op, seed=1).vector


def test_ordering_permutations_tie_break_by_id():
    v = np.array([1.0, -2.0, 1.0, 0.0])
    assert list(ordering_permutation(v, Ordering.NON_INCREASING)) == [0, 2, 3, 1]
    assert list(ordering_permutation(v, Ordering.NON_DECREASING)) == [1, 3, 0, 2]
    assert list(ordering_permutation(v, Ordering.ABS_NON_INCREASING)) == [1, 0, 2, 3]
    assert list(ordering_permutation(v, Ordering.ABS_NON_DECREASING)) == [3, 0, 2, 1]


def test_general_sweep_single_fair_edge():
    g = LabeledGraph.from_edges(2, [(0, 1)])
    c = Coloring.from_labels("RB")
    rec = general_sweep(g, c, np.array([0.9, 0.1]), delta=0.0)
    assert rec.status is SolveStatus.FOUND
    assert rec.node_set.as_tuple() == (0, 1)
    assert rec.density == 1.0 and rec.fair


def test_general_sweep_all_red_triangle_infeasible(triangle):
    c = Coloring.from_labels("RRR")
    rec = general_sweep(triangle, c, np.array([0.3, 0.2, 0.1]), delta=0.0)
    assert rec.status is SolveStatus.NO_FEASIBLE_PREFIX
    assert rec.size == 0 and not rec.fair
    assert rec.density == 0.0


def test_general_sweep_matches_rescan_oracle():
    rng = np.random.default_rng(31)
    for _ in range(40):
        n = int(rng.integers(2, 11))
        g = random_graph(rng, n, 0.5)
        c = random_coloring(rng, n, balanced=(n % 2 == 0))
        v = _eigvec(g, c, projected=True)
        delta = float(rng.choice([0.0, 0.25, 1.0]))
        rec = general_sweep(g, c, v, delta)
        expected = sweep_rescan(g, c.codes, v, delta)
        if expected is None:
            assert rec.status is SolveStatus.NO_FEASIBLE_PREFIX
        else:
            assert rec.status is SolveStatus.FOUND
            assert rec.node_set.as_tuple() == expected[0]
            assert rec.density == pytest.approx(expected[1], abs=1e-12)


def test_paired_sweep_k4(k4, k4_rrbb):
    rec = paired_sweep(k4, k4_rrbb, np.array([0.4, 0.3, 0.2, 0.1]))
    assert rec.status is SolveStatus.FOUND
    assert rec.node_set.as_tuple() == (0, 1, 2, 3)
    assert rec.density == 3.0 and rec.fair and rec.balance == 1.0


def test_paired_sweep_without_blue_nodes():
    g = LabeledGraph.from_edges(1, [])
    c = Coloring.from_labels("R")
    rec = paired_sweep(g, c, np.array([1.0]))
    assert rec.status is SolveStatus.NO_FEASIBLE_PREFIX


def test_paired_sweep_matches_rescan_oracle():
    rng = np.random.default_rng(37)
    for _ in range(40):
        n = int(rng.integers(2, 13))
        g = random_graph(rng, n, 0.5)
        c = random_coloring(rng, n)
        v = _eigvec(g, c, projected=bool(rng.integers(0, 2)))
        rec = paired_sweep(g, c, v)
        expected = pair_rescan(g, c.codes, v)
        if expected is None:
            assert rec.status is SolveStatus.NO_FEASIBLE_PREFIX
        else:
            assert rec.status is SolveStatus.FOUND
            assert rec.node_set.as_tuple() == expected[0]
            assert rec.density == pytest.approx(expected[1], abs=1e-12)
            assert rec.fair


def test_run_algorithm_k4_all_variants(k4, k4_rrbb):
    for name in ("ss", "fss", "ps", "fps"):
        rec = run_algorithm(name, k4, k4_rrbb)
        assert rec.algorithm == name
        assert rec.status is SolveStatus.FOUND
        assert rec.node_set.as_tuple() == (0, 1, 2, 3)
        assert rec.density == 3.0


def test_run_algorithm_rejects_unknown(k4, k4_rrbb):
    with pytest.raises(ValueError, match="unknown sweep algorithm"):
        run_algorithm("gsa", k4, k4_rrbb)


def test_paired_variants_never_return_unfair_solutions():
    rng = np.random.default_rng(41)
    for _ in range(60):
        n = int(rng.integers(1, 16))
        g = random_graph(rng, n, 0.4)
        c = random_coloring(rng, n)
        for name in ("ps", "fps"):
            rec = run_algorithm(name, g, c)
            assert rec.status in (SolveStatus.FOUND, SolveStatus.NO_FEASIBLE_PREFIX)
            if rec.status is SolveStatus.FOUND:
                assert rec.fair and rec.imbalance == 0


def test_fss_recovers_isolated_planted_clique():
    params = PlantedParams(n=30, m=10, d=9, eps=0.0, p_bg=0.0, seed=3)
    inst = generate(params)
    rec = run_algorithm("fss", inst.graph, inst.coloring)
    assert rec.status is SolveStatus.FOUND
    assert rec.node_set == inst.planted_set
    assert rec.density == pytest.approx(9.0)


def test_candidate_trace_counts_and_values(triangle):
    c3 = Coloring.from_labels("RRR")
    trace = candidate_trace("ss", triangle, c3)
    assert len(trace) == 4 * 3
    for block in range(4):
        densities = [trace[block * 3 + i][1] for i in range(3)]
        assert densities == [0.0, 1.0, 2.0]

    g = LabeledGraph.from_edges(2, [(0, 1)])
    c = Coloring.from_labels("RB")
    assert candidate_trace("ps", g, c) == [(2, 1.0, 1.0)] * 4


def test_trace_densities_match_scratch_recompute():
    rng = np.random.default_rng(43)
    for _ in range(15):
        n = int(rng.integers(2, 12))
        g = random_graph(rng, n, 0.6, weighted=True)
        c = random_coloring(rng, n)
        v = _eigvec(g, c, projected=True)
        a = dense_adjacency(g)
        for oi, ordering in enumerate(ALL_ORDERINGS):
            perm = ordering_permutation(v, ordering)
            trace = candidate_trace("fss", g, c, SweepConfig(seed=1))
            block = trace[oi * n:(oi + 1) * n]
            for s, (size, dens, _) in enumerate(block, start=1):
                assert size == s
                assert dens == pytest.approx(subset_density(a, perm[:s]), abs=1e-9)


def test_recorded_density_consistent_with_recompute():
    rng = np.random.default_rng(47)
    for _ in range(20):
        n = int(rng.integers(2, 12))
        g = random_graph(rng, n, 0.5, weighted=True)
        c = random_coloring(rng, n)
        v = _eigvec(g, c, projected=False)
        rec = general_sweep(g, c, v, delta=float(n))
        assert rec.status is SolveStatus.FOUND
        assert rec.density == pytest.approx(density(g, rec.node_set), abs=1e-9)


def test_huge_delta_gives_unconstrained_best_prefix():
    rng = np.random.default_rng(53)
    for _ in range(20):
        n = int(rng.integers(2, 11))
        g = random_graph(rng, n, 0.5)
        c = random_coloring(rng, n)
        v = _eigvec(g, c, projected=False)
        unconstrained = sweep_rescan(g, c.codes, v, delta=float(n))
        rec = general_sweep(g, c, v, delta=float(n))
        assert rec.node_set.as_tuple() == unconstrained[0]


def test_density_monotone_in_delta():
    rng = np.random.default_rng(59)
    for _ in range(20):
        n = int(rng.integers(2, 12))
        g = random_graph(rng, n, 0.5)
        c = random_coloring(rng, n)
        v = _eigvec(g, c, projected=True)
        last = -1.0
        for delta in (0.0, 0.2, 0.5, 1.0, float(n)):
            rec = general_sweep(g, c, v, delta)
            dens = rec.density if rec.status is SolveStatus.FOUND else -1.0
            if rec.status is SolveStatus.FOUND:
                assert dens >= last - 1e-12
                last = dens


def test_single_ordering_mode():
    # restricting to the non-increasing ordering reproduces the plain sweep
    g = LabeledGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)])
    c = Coloring.from_labels("RBRB")
    v = np.array([0.9, 0.8, 0.2, 0.1])
    rec = general_sweep(g, c, v, delta=0.0, orderings=(Ordering.NON_INCREASING,))
    assert rec.status is SolveStatus.FOUND
    # feasible prefixes are {0,1} (density 1) and the whole graph (density 2)
    assert rec.node_set.as_tuple() == (0, 1, 2, 3)
    assert rec.density == 2.0

    trace = candidate_trace("ss", g, c)
    assert len(trace) == 16


def test_dimension_mismatch_rejected(k4, k4_rrbb):
    with pytest.raises(ValueError, match="does not match"):
        general_sweep(k4, k4_rrbb, np.ones(3), 0.0)
    with pytest.raises(ValueError, match="does not match"):
        paired_sweep(k4, k4_rrbb, np.ones(5))
