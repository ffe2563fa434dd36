"""Uncoarsening of an edited coarse graph back to the finer level."""

from __future__ import annotations

import random
from typing import Dict, List

from .coarsening import Projection
from .graph import Graph, GraphError, edge_key


def interpolate(coarse: Graph, proj: Projection, rng: random.Random) -> Graph:
    """Materialize the fine graph for an edited coarse graph.

    Coarse nodes and edges that exist in ``proj`` are expanded verbatim.  A
    new coarse node clones (with fresh ids) the aggregate and internal edges of
    a random surviving coarse node.  A new coarse edge {a, b} copies the
    pre-image size l of a random surviving coarse edge, samples l fine
    endpoints with replacement on each side and pairs them up; repeated pairs
    are dropped.
    """
    fine = proj.fine
    old_nodes = [c for c in coarse.nodes() if c in proj.node_map]
    new_nodes = [c for c in coarse.nodes() if c not in proj.node_map]
    if new_nodes and not old_nodes:
        raise GraphError("no template for resampling")

    out = Graph()
    out.reserve_ids(max(fine.next_id, coarse.next_id))
    members: Dict[int, List[int]] = {}

    for c in old_nodes:
        agg = proj.node_map[c]
        members[c] = agg
        for f in agg:
            out.add_node(f, fine.size[f], fine.internal[f], fine.node_annotation.get(f))
    for c in old_nodes:
        for a, b in proj.internal_edges.get(c, ()):
            out.add_edge(a, b, fine.weight(a, b), fine.edge_annotation.get((a, b)))

    for c in new_nodes:
        tpl = old_nodes[rng.randrange(len(old_nodes))]
        relabel = {}
        for f in proj.node_map[tpl]:
            nf = out.new_node(fine.size[f], fine.internal[f], fine.node_annotation.get(f))
            relabel[f] = nf
        members[c] = [relabel[f] for f in proj.node_map[tpl]]
        for a, b in proj.internal_edges.get(tpl, ()):
            out.add_edge(relabel[a], relabel[b], fine.weight(a, b),
                         fine.edge_annotation.get((a, b)))

    coarse_edges = coarse.edges()
    old_edges = [e for e in coarse_edges if e in proj.edge_map]
    templates = old_edges or list(proj.edge_map)
    for e in coarse_edges:
        pre = proj.edge_map.get(e)
        if pre is not None:
            for a, b in pre:
                out.add_edge(a, b, fine.weight(a, b), fine.edge_annotation.get((a, b)))
            continue
        if templates:
            tpl_edges = proj.edge_map[templates[rng.randrange(len(templates))]]
        else:
            tpl_edges = []
        l = max(1, len(tpl_edges))
        side_u, side_v = members[e[0]], members[e[1]]
        U = [side_u[rng.randrange(len(side_u))] for _ in range(l)]
        V = [side_v[rng.randrange(len(side_v))] for _ in range(l)]
        rng.shuffle(U)
        rng.shuffle(V)
        for a, b in zip(U, V):
            if a == b or out.has_edge(a, b):
                continue
            ann = None
            if tpl_edges and fine.edge_annotation:
                ann = fine.edge_annotation.get(edge_key(*tpl_edges[rng.randrange(len(tpl_edges))]))
            out.add_edge(a, b, annotation=ann)
    return out
