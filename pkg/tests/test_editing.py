import logging
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from netreplica.baselines import watts_strogatz
from netreplica.config import EditConfig
from netreplica.editing import (EditLog, SpathDistribution, binomial, edit_edges_and_nodes,
                                estimate_spath_distribution, exact_spath_distribution,
                                insert_edge_at_distance, spath)
from netreplica.graph import Graph, GraphError, bfs_distances, edge_key, is_connected
from netreplica.metrics import clustering

from _graphs import complete, cycle, gnp, graphs, path, two_triangles_bridge


def rates(r, **kw):
    return EditConfig(node_edit_rates=[r], edge_edit_rates=[r], **kw)


def brute_spath(g, u, v):
    h = g.copy()
    h.remove_edge(u, v)
    return bfs_distances(h, u, h.number_of_nodes()).get(v)


def tv(p, q):
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def test_spath_examples():
    assert spath(complete(3), 0, 1) == 2
    assert spath(cycle(4), 1, 2) == 3
    assert spath(path(4), 0, 1) is None
    with pytest.raises(GraphError):
        spath(path(4), 0, 2)


@settings(max_examples=100)
@given(graphs(min_n=2, max_n=25))
def test_spath_matches_edge_removal(g):
    for u, v in g.edges()[:10]:
        assert spath(g, u, v, horizon=g.number_of_nodes()) == brute_spath(g, u, v)


def test_spath_horizon_cut():
    assert spath(cycle(10), 0, 1, horizon=9) == 9
    assert spath(cycle(10), 0, 1, horizon=8) is None


def test_estimate_uniform_graphs():
    cfg = EditConfig()
    assert estimate_spath_distribution(complete(3), cfg, random.Random(0), 100).probabilities == {2: 1.0}
    assert estimate_spath_distribution(cycle(4), cfg, random.Random(0), 100).probabilities == {3: 1.0}


def test_estimate_two_triangles():
    d = estimate_spath_distribution(two_triangles_bridge(), EditConfig(), random.Random(4), 7000)
    assert abs(d.probabilities[2] - 6 / 7) < 0.02
    assert abs(d.unreachable_mass - 1 / 7) < 0.02


def test_estimate_edgeless_warns(caplog):
    with caplog.at_level(logging.WARNING):
        d = estimate_spath_distribution(Graph.from_edges([], range(3)), EditConfig(), random.Random(0))
    assert d.empty and d.unreachable_mass == 1.0
    assert "edgeless" in caplog.text
    assert d.draw(random.Random(0)) is None


def test_distribution_draw_frequencies():
    d = SpathDistribution({2: 0.5, 3: 0.25}, 0.25, 4)
    rng = random.Random(1)
    draws = [d.draw(rng) for _ in range(20000)]
    assert abs(draws.count(2) / 20000 - 0.5) < 0.02
    assert abs(draws.count(None) / 20000 - 0.25) < 0.02


def test_insert_chord_in_c4():
    g = cycle(4)
    force2 = SpathDistribution({2: 1.0}, 0.0, 1)
    e = insert_edge_at_distance(g, 0, force2, EditConfig(), random.Random(0))
    assert e == (0, 2)


def test_insert_from_isolated_node_fails():
    g = Graph.from_edges([(0, 1)], [0, 1, 2])
    assert insert_edge_at_distance(g, 2, SpathDistribution({2: 1.0}, 0, 1), EditConfig(),
                                   random.Random(0)) is None
    assert g.number_of_edges() == 1


def test_insert_unreachable_fallback_stays_local():
    g = path(12)
    only_unreachable = SpathDistribution({}, 1.0, 1)
    cfg = EditConfig(bfs_horizon=3)
    for s in range(30):
        h = g.copy()
        u, v = insert_edge_at_distance(h, 5, only_unreachable, cfg, random.Random(s))
        assert 2 <= abs(u - v) <= 3


def test_insertions_follow_distribution():
    g = gnp(300, 0.05, 11)
    cfg = EditConfig()
    dist = exact_spath_distribution(g, cfg.bfs_horizon)
    rng = random.Random(2)
    seen = {}
    for _ in range(10000):
        u = g.random_node(rng)
        e = insert_edge_at_distance(g, u, dist, cfg, rng)
        if e is None:
            continue
        d = spath(g, *e, horizon=cfg.bfs_horizon)
        seen[d] = seen.get(d, 0) + 1
        g.remove_edge(*e)
    total = sum(seen.values())
    emp = {k: c / total for k, c in seen.items()}
    assert tv(emp, dist.probabilities) <= 0.05


@settings(max_examples=60)
@given(graphs(min_n=3, max_n=30), st.integers(1, 4), st.integers(0, 10**6))
def test_insertions_are_local(g, horizon, seed):
    if g.number_of_edges() == 0:
        return
    cfg = EditConfig(bfs_horizon=horizon)
    rng = random.Random(seed)
    dist = estimate_spath_distribution(g, cfg, rng)
    for _ in range(5):
        u = g.random_node(rng)
        before = bfs_distances(g, u, horizon)
        e = insert_edge_at_distance(g, u, dist, cfg, rng)
        if e is not None:
            v = e[0] if e[1] == u else e[1]
            assert 2 <= before.get(v, horizon + 1) <= horizon


@settings(max_examples=50)
@given(graphs(max_n=40), st.integers(0, 10**6))
def test_zero_rates_identity(g, seed):
    out = edit_edges_and_nodes(g, 0, EditConfig(), random.Random(seed))
    assert out.same_structure(g) and out is not g


def test_deterministic():
    g = gnp(120, 0.06, 3)
    a = edit_edges_and_nodes(g, 0, rates(0.1), random.Random(5))
    b = edit_edges_and_nodes(g, 0, rates(0.1), random.Random(5))
    assert a.same_structure(b)


def test_input_not_mutated():
    g = gnp(60, 0.1, 3)
    before = g.copy()
    edit_edges_and_nodes(g, 0, rates(0.2), random.Random(0))
    assert g.same_structure(before)


def _goals(log_):
    return [r for r in log_.records if r["op"] == "goals"][-1]


def test_node_edit_expectations():
    g = gnp(300, 0.05, 1)
    cfg = rates(0.08)
    deleted, added, n_out = [], [], []
    for s in range(200):
        lg = EditLog()
        out = edit_edges_and_nodes(g, 0, cfg, random.Random(s), lg)
        goal = _goals(lg)
        deleted.append(goal["nodes_deleted"])
        added.append(goal["nodes_added"])
        n_out.append(out.number_of_nodes())
    assert abs(np.mean(deleted) - 24) <= 3
    assert abs(np.mean(added) - 24) <= 3
    # node count is unbiased: two independent Binomial(300, .08) draws
    sigma = np.sqrt(2 * 300 * 0.08 * 0.92 / 200)
    assert abs(np.mean(n_out) - 300) <= 3 * sigma


def test_edge_count_unbiased():
    g = gnp(300, 0.05, 1)
    m = g.number_of_edges()
    outs = [edit_edges_and_nodes(g, 0, rates(0.08), random.Random(s)).number_of_edges()
            for s in range(200)]
    sem = np.std(outs) / np.sqrt(len(outs))
    assert abs(np.mean(outs) - m) <= max(3 * sem, 0.01 * m)


def test_clustering_preserved_on_small_world():
    g = watts_strogatz(250, 8, 0.05, random.Random(0))
    c0 = clustering(g)
    cs = [clustering(edit_edges_and_nodes(g, 0, rates(0.08), random.Random(s))) for s in range(50)]
    assert abs(np.mean(cs) / c0 - 1) <= 0.15


def uncorrelated_two_class_graph(seed):
    """200 nodes of degree 10 and 100 of degree 20; every node has half its
    neighbors in each class, so neighbor degrees do not depend on own degree."""
    a = nx.random_regular_graph(5, 200, seed=seed)
    b = nx.random_regular_graph(10, 100, seed=seed + 1)
    g = Graph.from_edges(list(a.edges()) + [(200 + u, 200 + v) for u, v in b.edges()], range(300))
    for i in range(200):
        for k in range(5):
            g.add_edge(i, 200 + (i + 7 * k) % 100)
    return g


def _deletion_loss(g, cfg, runs):
    loss = {u: 0 for u in g.nodes()}
    for s in range(runs):
        lg = EditLog()
        edit_edges_and_nodes(g, 0, cfg, random.Random(s), lg)
        for r in lg.records:
            if r["op"] == "delete_edge":
                for u in r["ids"]:
                    loss[u] += 1
    return loss


def test_deferential_detachment_degree_independent_loss():
    g = uncorrelated_two_class_graph(3)
    assert sorted(set(g.degrees().values())) == [10, 20]
    nodes = g.nodes()
    x = np.array([g.degree(u) for u in nodes], dtype=float)
    runs = 500
    cfg = EditConfig(node_edit_rates=[0.0], edge_edit_rates=[0.05], deferential_detachment=True,
                     loop_safety_factor=100)
    loss = _deletion_loss(g, cfg, runs)
    y = np.array([loss[u] / runs for u in nodes])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    se = np.sqrt(resid.var(ddof=2) / ((x - x.mean()) ** 2).sum())
    assert abs(slope) <= 3 * se
    # without the filter, loss is proportional to degree
    plain = _deletion_loss(g, EditConfig(node_edit_rates=[0.0], edge_edit_rates=[0.05]), 100)
    assert np.polyfit(x, [plain[u] / 100 for u in nodes], 1)[0] > 20 * se


def test_mutual_neighbor_protection_spares_triangle_edges():
    g = watts_strogatz(200, 8, 0.1, random.Random(1))
    protected = tri_deleted = 0
    for flag in (False, True):
        count = 0
        for s in range(40):
            lg = EditLog()
            edit_edges_and_nodes(g, 0, rates(0.1, mutual_neighbor_protection=flag), random.Random(s), lg)
            for r in lg.records:
                if r["op"] == "delete_edge":
                    u, v = r["ids"]
                    count += bool(set(g.neighbors(u)) & set(g.neighbors(v)))
        if flag:
            protected = count
        else:
            tri_deleted = count
    assert protected < tri_deleted


def test_enforce_connectivity():
    g = gnp(150, 0.025, 4)
    for s in range(10):
        cfg = EditConfig(node_edit_rates=[0.0], edge_edit_rates=[0.3], enforce_connectivity=True)
        lg = EditLog()
        out = edit_edges_and_nodes(g, 0, cfg, random.Random(s), lg)
        deletions = [r for r in lg.records if r["op"] in ("delete_edge", "connect_edge")]
        # repair happens right after deletions: replay them and check connectivity
        h = g.copy()
        for r in deletions:
            if r["op"] == "delete_edge":
                h.remove_edge(*r["ids"])
            else:
                h.add_edge(*r["ids"])
        assert is_connected(h)


def test_growth_increases_counts():
    g = gnp(200, 0.05, 2)
    grow = EditConfig(node_edit_rates=[0.08], edge_edit_rates=[0.08],
                      node_growth_rates=[0.5], edge_growth_rates=[0.5])
    ns = [edit_edges_and_nodes(g, 0, grow, random.Random(s)).number_of_nodes() for s in range(50)]
    assert np.mean(ns) > 200 + 3


def test_new_node_degree_resampled():
    g = gnp(200, 0.05, 2)
    degs = set(g.degrees().values())
    lg = EditLog()
    out = edit_edges_and_nodes(g, 0, EditConfig(node_edit_rates=[0.1]), random.Random(3), lg)
    new = [r["ids"][0] for r in lg.records if r["op"] == "add_node"]
    survivors = [u for u in new if u in out]
    assert survivors
    assert all(u not in g for u in new)
    # edges to the new node from later deletions can only lower its degree
    assert all(out.degree(u) <= max(degs) for u in survivors)


def test_annotations_resampled():
    g = gnp(100, 0.08, 2)
    for u in g.nodes():
        g.node_annotation[u] = b"A" if u % 2 else b"B"
    for e in g.edges():
        g.edge_annotation[e] = b"x"
    out = edit_edges_and_nodes(g, 0, rates(0.1), random.Random(0))
    new_nodes = out.node_set() - g.node_set()
    assert new_nodes
    assert {out.node_annotation[u] for u in new_nodes} <= {b"A", b"B"}
    new_edges = out.edge_set() - g.edge_set()
    assert all(out.edge_annotation.get(e) == b"x" for e in new_edges)


def test_binomial_edges():
    rng = random.Random(0)
    assert binomial(rng, 0, 0.5) == 0
    assert binomial(rng, 10, 0.0) == 0
    assert binomial(rng, 10, 1.0) == 10
    xs = [binomial(rng, 300, 0.08) for _ in range(2000)]
    assert abs(np.mean(xs) - 24) < 3 * np.sqrt(300 * 0.08 * 0.92 / 2000)


def test_edit_log_summary():
    lg = EditLog()
    edit_edges_and_nodes(gnp(100, 0.1, 0), 0, rates(0.1), random.Random(0), lg)
    s = lg.summary()
    goals = _goals(lg)
    assert s["delete_node"] == goals["nodes_deleted"]
    assert s.get("delete_edge", 0) == goals["edges_deleted"]
