"""One level of strict (non-fractional) aggregation.

Seeds are picked greedily by weighted degree, every other node joins the
neighboring seed it is most strongly connected to, and the coarse graph is
the restriction P^T L P of the fine Laplacian with a 0/1 assignment matrix P.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from .config import EditConfig
from .graph import Edge, Graph, GraphError, density, edge_key


@dataclass
class Projection:
    """Link between a coarse graph and the finer graph it was built from.

    ``node_map[c]`` lists the fine nodes of aggregate ``c`` with the seed
    first; ``edge_map[(a, b)]`` lists the fine edges crossing between two
    aggregates; ``internal_edges[c]`` lists fine edges inside aggregate ``c``.
    """

    fine: Graph
    node_map: Dict[int, List[int]] = field(default_factory=dict)
    edge_map: Dict[Edge, List[Edge]] = field(default_factory=dict)
    internal_edges: Dict[int, List[Edge]] = field(default_factory=dict)

    def aggregate_of(self) -> Dict[int, int]:
        return {f: c for c, members in self.node_map.items() for f in members}


@dataclass
class HierarchyLevel:
    level_index: int
    graph: Graph
    projection_to_finer: Optional[Projection] = None


def select_seeds(g: Graph, rng=None) -> Tuple[Set[int], Set[int]]:
    """Split nodes into seeds C and non-seeds F.

    Pass 1 walks nodes by decreasing weighted degree (ties: smaller id) and
    makes a node a seed unless it already has a seed neighbor.  Pass 2
    promotes any node still lacking a seed neighbor.  ``rng`` is accepted for
    interface symmetry; the selection is deterministic.
    """
    if g.number_of_nodes() == 0:
        raise GraphError("empty graph")
    order = sorted(g.nodes(), key=lambda u: (-g.weighted_degree(u), u))
    seeds: Set[int] = set()
    dominated: Set[int] = set()
    for u in order:
        if u in dominated or u in seeds:
            continue
        seeds.add(u)
        dominated.update(g.neighbors(u))
    for u in order:
        if u not in seeds and not any(v in seeds for v in g.neighbors(u)):
            seeds.add(u)
    rest = set(g.nodes()) - seeds
    return seeds, rest


def aggregate(g: Graph, seeds: Tuple[Set[int], Set[int]]) -> Tuple[Graph, Projection]:
    """Build the coarse graph and projection for a seed split."""
    C, F = seeds
    owner: Dict[int, int] = {c: c for c in C}
    for u in F:
        best, best_w = None, 0.0
        for v, w in g.neighbors(u).items():
            if v in C and (best is None or w > best_w or (w == best_w and v < best)):
                best, best_w = v, w
        if best is None:
            raise GraphError(f"F-node with no seed neighbor: {u}")
        owner[u] = best

    proj = Projection(fine=g)
    coarse = Graph()
    # coarse ids are seed ids; visit fine nodes in their stored order for determinism
    for u in g.nodes():
        if u in C:
            proj.node_map[u] = [u]
            proj.internal_edges[u] = []
    for u in sorted(F):
        proj.node_map[owner[u]].append(u)

    size = {c: 0 for c in proj.node_map}
    internal = {c: 0 for c in proj.node_map}
    for u in g.nodes():
        c = owner[u]
        size[c] += g.size[u]
        internal[c] += g.internal[u]
    for c in proj.node_map:
        coarse.add_node(c, size[c], internal[c], g.node_annotation.get(c))
    coarse.reserve_ids(g.next_id)

    cross_weight: Dict[Edge, float] = {}
    for u, v in g.edges():
        a, b = owner[u], owner[v]
        w = g.weight(u, v)
        if a == b:
            proj.internal_edges[a].append((u, v))
            coarse.internal[a] += int(round(w))
        else:
            key = edge_key(a, b)
            if key in cross_weight:
                cross_weight[key] += w
                proj.edge_map[key].append((u, v))
            else:
                cross_weight[key] = w
                proj.edge_map[key] = [(u, v)]
    for (a, b), w in cross_weight.items():
        coarse.add_edge(a, b, w)
    return coarse, proj


def coarsen(g: Graph, rng=None) -> Tuple[Graph, Projection]:
    return aggregate(g, select_seeds(g, rng))


def should_coarsen(g: Graph, level: int, cfg: EditConfig) -> bool:
    """Whether Revise should build a coarser level below ``g``.

    No when the graph is a single node, has no edges (aggregation could not
    shrink it), is at least ``cfg.max_density`` dense, or no edits are
    requested at any coarser level.
    """
    if g.number_of_nodes() <= 1 or g.number_of_edges() == 0:
        return False
    if density(g) >= cfg.max_density:
        return False
    return cfg.has_edits_above(level)


def build_hierarchy(g: Graph, cfg: EditConfig, max_levels: Optional[int] = None) -> List[HierarchyLevel]:
    """Coarsen repeatedly while ``should_coarsen`` allows; level 0 is ``g``."""
    levels = [HierarchyLevel(0, g)]
    cur = g
    while should_coarsen(cur, len(levels) - 1, cfg):
        if max_levels is not None and len(levels) >= max_levels:
            break
        coarse, proj = coarsen(cur)
        levels.append(HierarchyLevel(len(levels), coarse, proj))
        cur = coarse
    return levels
