import random

import numpy as np
import pytest
from hypothesis import given, settings

from netreplica.coarsening import aggregate, build_hierarchy, coarsen, select_seeds, should_coarsen
from netreplica.config import EditConfig, preset
from netreplica.graph import Graph, GraphError

from _graphs import adjacency_matrix, complete, gnp, graphs, path, star, two_triangles_bridge


def dense_restriction(fine, coarse, proj):
    """Return (P^T L P, P^T D P) built from dense matrices."""
    fnodes, cnodes = fine.nodes(), coarse.nodes()
    fi = {u: i for i, u in enumerate(fnodes)}
    ci = {c: j for j, c in enumerate(cnodes)}
    P = np.zeros((len(fnodes), len(cnodes)))
    for c, members in proj.node_map.items():
        for f in members:
            P[fi[f], ci[c]] = 1
    A = adjacency_matrix(fine, fnodes)
    D = np.diag(A.sum(axis=1))
    return P.T @ (D - A) @ P, P.T @ D @ P, cnodes


def test_seeds_star():
    C, F = select_seeds(star(4))
    assert C == {0} and F == {1, 2, 3, 4}


def test_seeds_edgeless():
    g = Graph.from_edges([], range(3))
    assert select_seeds(g) == ({0, 1, 2}, set())


def test_seeds_empty_graph():
    with pytest.raises(GraphError):
        select_seeds(Graph())


@settings(max_examples=200)
@given(graphs(max_n=40))
def test_seed_postcondition(g):
    C, F = select_seeds(g)
    assert C | F == g.node_set() and not (C & F)
    assert all(any(v in C for v in g.neighbors(u)) for u in F)


def test_seeds_path_exhaustive():
    C, F = select_seeds(path(4))
    assert all(any(v in C for v in path(4).neighbors(u)) for u in F)
    # highest weighted degree first, ties by id: node 1 then node 3
    assert C == {1, 3}


def test_aggregate_star():
    coarse, proj = aggregate(star(4), ({0}, {1, 2, 3, 4}))
    assert coarse.nodes() == [0]
    assert coarse.size[0] == 5 and coarse.internal[0] == 4
    assert coarse.number_of_edges() == 0
    assert proj.node_map[0] == [0, 1, 2, 3, 4]


def test_aggregate_two_triangles():
    g = two_triangles_bridge()
    coarse, proj = aggregate(g, ({0, 5}, {1, 2, 3, 4}))
    assert coarse.number_of_nodes() == 2
    assert coarse.edges() == [(0, 5)] and coarse.weight(0, 5) == 1.0
    assert coarse.internal[0] == 3 and coarse.internal[5] == 3
    L, _, _ = dense_restriction(g, coarse, proj)
    assert L[0, 1] == -1.0


def test_aggregate_violated_precondition():
    with pytest.raises(GraphError, match="F-node with no seed neighbor"):
        aggregate(path(4), ({0}, {1, 2, 3}))


def test_aggregate_identity():
    g = gnp(25, 0.2, 5)
    coarse, proj = aggregate(g, (g.node_set(), set()))
    assert coarse.same_structure(g)
    assert all(coarse.size[u] == 1 for u in coarse.nodes())


@settings(max_examples=200)
@given(graphs(min_n=2, max_n=40))
def test_laplacian_restriction(g):
    coarse, proj = coarsen(g)
    L, DP, cnodes = dense_restriction(g, coarse, proj)
    Ac = adjacency_matrix(coarse, cnodes)
    off = ~np.eye(len(cnodes), dtype=bool)
    assert np.array_equal(L[off], -Ac[off])
    internal = np.array([coarse.internal[c] for c in cnodes], dtype=float)
    # P^T L P keeps only crossing weight on its diagonal; the internal weight
    # shows up (twice) in the restricted degree matrix P^T D P
    assert np.array_equal(np.diag(L), Ac.sum(axis=1))
    assert np.array_equal(np.diag(DP), Ac.sum(axis=1) + 2 * internal)


@settings(max_examples=100)
@given(graphs(min_n=1, max_n=40))
def test_partition_and_size_conservation(g):
    coarse, proj = coarsen(g)
    seen = [f for members in proj.node_map.values() for f in members]
    assert sorted(seen) == sorted(g.nodes())
    assert coarse.number_of_nodes() == len(proj.node_map)
    assert sum(coarse.size.values()) == sum(g.size.values())
    for c, members in proj.node_map.items():
        assert members[0] == c
        assert coarse.size[c] == sum(g.size[f] for f in members)
    coarse.validate()


@settings(max_examples=100)
@given(graphs(min_n=1, max_n=40))
def test_termination(g):
    cfg = EditConfig(node_edit_rates=[0.0] * 60 + [0.1])
    levels = build_hierarchy(g, cfg)
    assert len(levels) - 1 <= g.number_of_nodes()
    assert not should_coarsen(levels[-1].graph, len(levels) - 1, cfg)


def test_should_coarsen_rules():
    assert not should_coarsen(complete(4), 0, preset("p2"))
    assert not should_coarsen(Graph.from_edges([], [0]), 0, preset("p2"))
    cfg = EditConfig(node_edit_rates=[0, 0, 0.05], edge_edit_rates=[0, 0, 0.05])
    g = gnp(100, 0.04, 1)
    assert should_coarsen(g, 0, cfg)
    assert not should_coarsen(g, 2, cfg)
    assert not should_coarsen(g, 0, preset("zero"))


def test_hierarchy_levels_link():
    g = gnp(200, 0.03, 2)
    levels = build_hierarchy(g, preset("p2"))
    assert levels[0].projection_to_finer is None
    for lo, hi in zip(levels, levels[1:]):
        assert hi.projection_to_finer.fine is lo.graph
        assert hi.graph.number_of_nodes() < lo.graph.number_of_nodes()


def test_coarsen_deterministic():
    g = gnp(80, 0.08, 7)
    a, pa = coarsen(g, random.Random(1))
    b, pb = coarsen(g, random.Random(2))
    assert a.same_structure(b) and pa.node_map == pb.node_map
