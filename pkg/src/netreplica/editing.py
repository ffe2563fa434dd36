"""Randomized local edits of one hierarchy level.

New edges are placed by drawing a target hop distance from the empirical
distribution of "spath" values (length of the shortest alternative path
between the endpoints of an existing edge) and connecting to a node at that
distance.  Nodes are added by resampling the degree of an existing node.
"""

from __future__ import annotations

import bisect
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import EditConfig
from .graph import Edge, Graph, GraphError, connected_components, edge_key

log = logging.getLogger(__name__)

DEFAULT_SPATH_SAMPLES = 1000


def spath(g: Graph, u: int, v: int, horizon: int = 20) -> Optional[int]:
    """Length of the shortest u-v path avoiding edge {u,v}, or None if not within ``horizon``."""
    if not g.has_edge(u, v):
        raise GraphError(f"edge {{{u},{v}}} not found")
    adj = g._adj
    if len(adj[u]) > len(adj[v]):
        u, v = v, u
    # search from the low-degree end; the first hop may not use the edge itself
    seen = {u}
    frontier = []
    for y in adj[u]:
        if y != v:
            seen.add(y)
            frontier.append(y)
    depth = 1
    while frontier and depth < horizon:
        depth += 1
        nxt = []
        for x in frontier:
            nbrs = adj[x]
            if v in nbrs:
                return depth
            for y in nbrs:
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return None


@dataclass
class SpathDistribution:
    probabilities: Dict[int, float]
    unreachable_mass: float
    sample_size: int
    empty: bool = False

    def __post_init__(self) -> None:
        keys = sorted(self.probabilities)
        self._values = keys
        acc, cum = 0.0, []
        for k in keys:
            acc += self.probabilities[k]
            cum.append(acc)
        self._cum = cum

    def draw(self, rng: random.Random) -> Optional[int]:
        """Sample a distance; None stands for "unreachable"."""
        x = rng.random()
        i = bisect.bisect_right(self._cum, x)
        if i < len(self._values):
            return self._values[i]
        return None

    def to_dict(self) -> dict:
        return {
            "probabilities": {str(k): p for k, p in sorted(self.probabilities.items())},
            "unreachable_mass": self.unreachable_mass,
            "sample_size": self.sample_size,
            "empty": self.empty,
        }


def exact_spath_distribution(g: Graph, horizon: int = 20) -> SpathDistribution:
    """spath distribution over every edge (no sampling)."""
    counts: Dict[Optional[int], int] = {}
    for u, v in g.edges():
        d = spath(g, u, v, horizon)
        counts[d] = counts.get(d, 0) + 1
    return _from_counts(counts, g.number_of_edges())


def _from_counts(counts: Dict[Optional[int], int], total: int) -> SpathDistribution:
    if total == 0:
        return SpathDistribution({}, 1.0, 1, empty=True)
    probs = {d: c / total for d, c in counts.items() if d is not None}
    return SpathDistribution(probs, counts.get(None, 0) / total, total)


def estimate_spath_distribution(g: Graph, cfg: EditConfig, rng: random.Random,
                                sample_size: Optional[int] = None) -> SpathDistribution:
    """Empirical spath frequencies over edges sampled uniformly with replacement."""
    m = g.number_of_edges()
    if m == 0:
        log.warning("spath distribution requested on an edgeless graph")
        return SpathDistribution({}, 1.0, 1, empty=True)
    k = sample_size or cfg.spath_sample_size or min(m, DEFAULT_SPATH_SAMPLES)
    cache: Dict[Edge, Optional[int]] = {}
    counts: Dict[Optional[int], int] = {}
    for _ in range(k):
        e = g.random_edge(rng)
        if e in cache:
            d = cache[e]
        else:
            d = cache[e] = spath(g, e[0], e[1], cfg.bfs_horizon)
        counts[d] = counts.get(d, 0) + 1
    return _from_counts(counts, k)


def binomial(rng: random.Random, n: int, p: float) -> int:
    if n <= 0 or p <= 0:
        return 0
    if p >= 1:
        return n
    return int(np.random.default_rng(rng.getrandbits(64)).binomial(n, p))


def _resample_edge_annotation(g: Graph, rng: random.Random) -> Optional[bytes]:
    if not g.edge_annotation or g.number_of_edges() == 0:
        return None
    return g.edge_annotation.get(g.random_edge(rng))


def _resample_node_annotation(g: Graph, rng: random.Random) -> Optional[bytes]:
    if not g.node_annotation or g.number_of_nodes() == 0:
        return None
    return g.node_annotation.get(g.random_node(rng))


class _Layers:
    """BFS layers around one source, extended on demand (graph must not change)."""

    def __init__(self, g: Graph, source: int):
        self._adj = g._adj
        self._seen = {source}
        self.layers: List[List[int]] = [[source]]

    def at(self, d: int) -> List[int]:
        while len(self.layers) <= d and self.layers[-1]:
            nxt = []
            for x in self.layers[-1]:
                for y in self._adj[x]:
                    if y not in self._seen:
                        self._seen.add(y)
                        nxt.append(y)
            self.layers.append(nxt)
        return self.layers[d] if d < len(self.layers) else []

    def ball(self, lo: int, hi: int) -> List[int]:
        self.at(hi)
        return [v for layer in self.layers[lo:hi + 1] for v in layer]


def insert_edge_at_distance(g: Graph, u: int, dist: SpathDistribution, cfg: EditConfig,
                            rng: random.Random) -> Optional[Edge]:
    """Insert an edge from ``u`` to a random node at a sampled hop distance.

    An "unreachable" draw is redrawn up to ``loop_safety_factor`` times; if
    every draw is unreachable the target is a uniform node at distance
    2..horizon.  Returns the new edge, or None after ``loop_safety_factor``
    failed attempts.
    """
    if u not in g:
        raise GraphError("node not found")
    tries = cfg.loop_safety_factor
    bfs = _Layers(g, u)
    for _ in range(tries):
        d = dist.draw(rng)
        redraws = 0
        while d is None and redraws < tries:
            d = dist.draw(rng)
            redraws += 1
        if d is None:
            candidates = bfs.ball(2, cfg.bfs_horizon)
        else:
            candidates = bfs.at(min(d, cfg.bfs_horizon))
        if not candidates:
            continue
        v = candidates[rng.randrange(len(candidates))]
        g.add_edge(u, v, annotation=_resample_edge_annotation(g, rng))
        return edge_key(u, v)
    return None


def _avg_degree(g: Graph) -> float:
    n = g.number_of_nodes()
    return 2.0 * g.number_of_edges() / n if n else 0.0


def _mutual_neighbors(g: Graph, u: int, v: int) -> int:
    a, b = g.neighbors(u), g.neighbors(v)
    if len(a) > len(b):
        a, b = b, a
    return sum(1 for x in a if x in b)


@dataclass
class EditLog:
    """Audit trail of one or more editing passes."""

    records: List[dict] = field(default_factory=list)

    def add(self, op: str, level: int, ids) -> None:
        self.records.append({"op": op, "level": level, "ids": list(ids)})

    def goals(self, level: int, **counts) -> None:
        self.records.append({"op": "goals", "level": level, **counts})

    def summary(self) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for r in self.records:
            if r["op"] != "goals":
                out[r["op"]] = out.get(r["op"], 0) + 1
        return out


def connect_components(g: Graph, rng: random.Random, level: int = 0,
                       log_: Optional[EditLog] = None) -> int:
    """Join each smaller component to the largest one with a single edge."""
    comps = connected_components(g)
    if len(comps) <= 1:
        return 0
    big = max(range(len(comps)), key=lambda i: (len(comps[i]), -min(comps[i])))
    main = comps[big]
    added = 0
    for i, comp in enumerate(comps):
        if i == big:
            continue
        a = comp[rng.randrange(len(comp))]
        b = main[rng.randrange(len(main))]
        g.add_edge(a, b, annotation=_resample_edge_annotation(g, rng))
        added += 1
        if log_ is not None:
            log_.add("connect_edge", level, edge_key(a, b))
    return added


def edit_edges_and_nodes(g: Graph, level: int, cfg: EditConfig, rng: random.Random,
                         log_: Optional[EditLog] = None) -> Graph:
    """Return an edited copy of ``g`` using the level-``level`` rates of ``cfg``.

    Order: edge deletions, optional connectivity repair, edge insertions,
    node insertions, node deletions.  Every loop gives up after
    ``loop_safety_factor`` times its goal; shortfalls go into the log.
    """
    out = g.copy()
    eer, ner = cfg.edge_rate(level), cfg.node_rate(level)
    if eer == 0 and ner == 0:
        return out
    m, n = out.number_of_edges(), out.number_of_nodes()
    p_edge_add = min(1.0, eer * (1.0 + cfg.edge_growth(level)))
    p_node_add = min(1.0, ner * (1.0 + cfg.node_growth(level)))
    e_del = binomial(rng, m, eer)
    e_add = binomial(rng, m, p_edge_add)
    n_del = binomial(rng, n, ner)
    n_add = binomial(rng, n, p_node_add)
    factor = cfg.loop_safety_factor
    achieved = dict(edges_deleted=0, edges_added=0, nodes_added=0, nodes_deleted=0)

    dist = None
    if (e_add or n_add) and m > 0:
        dist = estimate_spath_distribution(out, cfg, rng)

    # edge deletions
    avg_deg = _avg_degree(out)
    attempts = 0
    while achieved["edges_deleted"] < e_del and out.number_of_edges() and attempts < factor * e_del:
        attempts += 1
        u, v = out.random_edge(rng)
        if cfg.deferential_detachment:
            if rng.random() > avg_deg / (out.degree(u) * out.degree(v)):
                continue
        if cfg.mutual_neighbor_protection:
            k = _mutual_neighbors(out, u, v)
            if k and rng.random() > 0.5 / k:
                continue
        out.remove_edge(u, v)
        achieved["edges_deleted"] += 1
        if log_ is not None:
            log_.add("delete_edge", level, (u, v))

    if cfg.enforce_connectivity:
        connect_components(out, rng, level, log_)

    # edge insertions
    if dist is not None and not dist.empty:
        attempts = 0
        while achieved["edges_added"] < e_add and attempts < factor * e_add:
            attempts += 1
            u = out.random_node(rng)
            e = insert_edge_at_distance(out, u, dist, cfg, rng)
            if e is not None:
                achieved["edges_added"] += 1
                if log_ is not None:
                    log_.add("add_edge", level, e)

    # node insertions: degree resampled from a random source node
    attempts = 0
    while achieved["nodes_added"] < n_add and out.number_of_nodes() and attempts < factor * n_add:
        attempts += 1
        anchor = out.random_node(rng)
        source = out.random_node(rng)
        target_deg = out.degree(source)
        u = out.new_node(size=out.size[source], internal=out.internal[source],
                         annotation=_resample_node_annotation(out, rng))
        achieved["nodes_added"] += 1
        if log_ is not None:
            log_.add("add_node", level, (u,))
        if target_deg == 0:
            continue
        out.add_edge(u, anchor, annotation=_resample_edge_annotation(out, rng))
        if log_ is not None:
            log_.add("add_edge", level, edge_key(u, anchor))
        if dist is None or dist.empty:
            continue
        tries = 0
        while out.degree(u) < target_deg and tries < factor * (target_deg - 1):
            tries += 1
            e = insert_edge_at_distance(out, u, dist, cfg, rng)
            if e is not None and log_ is not None:
                log_.add("add_edge", level, e)

    # node deletions
    while achieved["nodes_deleted"] < n_del and out.number_of_nodes():
        u = out.random_node(rng)
        out.remove_node(u)
        achieved["nodes_deleted"] += 1
        if log_ is not None:
            log_.add("delete_node", level, (u,))

    if log_ is not None:
        log_.goals(level, edges_to_delete=e_del, edges_to_add=e_add,
                   nodes_to_delete=n_del, nodes_to_add=n_add, **achieved)
    short = [k for k, goal in (("edges_deleted", e_del), ("edges_added", e_add),
                               ("nodes_added", n_add), ("nodes_deleted", n_del))
             if achieved[k] < goal]
    if short:
        log.debug("level %d: goals not met for %s", level, ", ".join(short))
    return out
