"""Undirected weighted graph used at every level of the hierarchy.

Nodes carry a ``size`` (number of finest-level nodes they stand for), an
``internal`` count (finest-level edges absorbed inside the aggregate) and an
optional opaque annotation.  Edges carry a positive weight and an optional
annotation.  Node and edge collections are also kept in flat lists so that
uniform sampling is O(1).
"""

from __future__ import annotations

import random
from collections import deque
from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Tuple

Edge = Tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class GraphError(ValueError):
    pass


class Graph:
    """Simple undirected graph with node sizes and edge weights."""

    __slots__ = (
        "_adj",
        "_nodes",
        "_node_pos",
        "_edges",
        "_edge_pos",
        "size",
        "internal",
        "node_annotation",
        "edge_annotation",
        "next_id",
    )

    def __init__(self) -> None:
        self._adj: Dict[int, Dict[int, float]] = {}
        self._nodes: List[int] = []
        self._node_pos: Dict[int, int] = {}
        self._edges: List[Edge] = []
        self._edge_pos: Dict[Edge, int] = {}
        self.size: Dict[int, int] = {}
        self.internal: Dict[int, int] = {}
        self.node_annotation: Dict[int, bytes] = {}
        self.edge_annotation: Dict[Edge, bytes] = {}
        # high-water mark for fresh ids; never decreases, so deleted ids are not reused
        self.next_id = 0

    # -- construction -------------------------------------------------

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, int]], nodes: Iterable[int] = ()) -> "Graph":
        g = cls()
        for u in nodes:
            g.add_node(u)
        for u, v in edges:
            if u == v:
                g.add_node(u)
                continue
            if u not in g._adj:
                g.add_node(u)
            if v not in g._adj:
                g.add_node(v)
            if v not in g._adj[u]:
                g.add_edge(u, v)
        return g

    def copy(self) -> "Graph":
        h = Graph.__new__(Graph)
        h._adj = {u: dict(nbrs) for u, nbrs in self._adj.items()}
        h._nodes = list(self._nodes)
        h._node_pos = dict(self._node_pos)
        h._edges = list(self._edges)
        h._edge_pos = dict(self._edge_pos)
        h.size = dict(self.size)
        h.internal = dict(self.internal)
        h.node_annotation = dict(self.node_annotation)
        h.edge_annotation = dict(self.edge_annotation)
        h.next_id = self.next_id
        return h

    # -- mutation -----------------------------------------------------

    def add_node(self, u: int, size: int = 1, internal: int = 0,
                 annotation: Optional[bytes] = None) -> None:
        if u in self._adj:
            raise GraphError(f"node {u} already present")
        if size < 1:
            raise GraphError(f"node size must be >= 1, got {size}")
        self._adj[u] = {}
        self._node_pos[u] = len(self._nodes)
        self._nodes.append(u)
        self.size[u] = size
        self.internal[u] = internal
        if annotation is not None:
            self.node_annotation[u] = annotation
        if u >= self.next_id:
            self.next_id = u + 1

    def new_node(self, size: int = 1, internal: int = 0,
                 annotation: Optional[bytes] = None) -> int:
        u = self.next_id
        self.add_node(u, size, internal, annotation)
        return u

    def reserve_ids(self, upto: int) -> None:
        """Make sure fresh ids handed out later are >= ``upto``."""
        if upto > self.next_id:
            self.next_id = upto

    def remove_node(self, u: int) -> List[int]:
        """Remove ``u`` and its incident edges; return the former neighbors."""
        if u not in self._adj:
            raise GraphError("node not found")
        nbrs = list(self._adj[u])
        for v in nbrs:
            self.remove_edge(u, v)
        del self._adj[u]
        pos = self._node_pos.pop(u)
        last = self._nodes.pop()
        if last != u:
            self._nodes[pos] = last
            self._node_pos[last] = pos
        del self.size[u]
        del self.internal[u]
        self.node_annotation.pop(u, None)
        return nbrs

    def add_edge(self, u: int, v: int, weight: float = 1.0,
                 annotation: Optional[bytes] = None) -> None:
        if u == v:
            raise GraphError(f"self-loop on node {u}")
        if u not in self._adj or v not in self._adj:
            raise GraphError("node not found")
        if v in self._adj[u]:
            raise GraphError(f"edge {{{u},{v}}} already present")
        if not weight > 0:
            raise GraphError(f"edge weight must be positive, got {weight}")
        self._adj[u][v] = weight
        self._adj[v][u] = weight
        key = edge_key(u, v)
        self._edge_pos[key] = len(self._edges)
        self._edges.append(key)
        if annotation is not None:
            self.edge_annotation[key] = annotation

    def remove_edge(self, u: int, v: int) -> None:
        key = edge_key(u, v)
        pos = self._edge_pos.pop(key, None)
        if pos is None:
            raise GraphError(f"edge {{{u},{v}}} not found")
        del self._adj[u][v]
        del self._adj[v][u]
        last = self._edges.pop()
        if last != key:
            self._edges[pos] = last
            self._edge_pos[last] = pos
        self.edge_annotation.pop(key, None)

    # -- queries ------------------------------------------------------

    def __contains__(self, u: Hashable) -> bool:
        return u in self._adj

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[int]:
        return iter(self._nodes)

    def __repr__(self) -> str:
        return f"Graph(n={len(self._nodes)}, m={len(self._edges)})"

    def nodes(self) -> List[int]:
        return list(self._nodes)

    def edges(self) -> List[Edge]:
        return list(self._edges)

    def number_of_nodes(self) -> int:
        return len(self._nodes)

    def number_of_edges(self) -> int:
        return len(self._edges)

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self._adj.get(u)
        return nbrs is not None and v in nbrs

    def neighbors(self, u: int) -> Dict[int, float]:
        """Neighbor -> weight mapping (live view; do not mutate)."""
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def weighted_degree(self, u: int) -> float:
        return sum(self._adj[u].values())

    def weight(self, u: int, v: int) -> float:
        return self._adj[u][v]

    def edge_set(self) -> set:
        return set(self._edges)

    def node_set(self) -> set:
        return set(self._nodes)

    def same_structure(self, other: "Graph") -> bool:
        return self.node_set() == other.node_set() and self.edge_set() == other.edge_set()

    def degrees(self) -> Dict[int, int]:
        return {u: len(self._adj[u]) for u in self._nodes}

    def has_annotations(self) -> bool:
        return bool(self.node_annotation) or bool(self.edge_annotation)

    def random_node(self, rng: random.Random) -> int:
        if not self._nodes:
            raise GraphError("empty graph")
        return self._nodes[rng.randrange(len(self._nodes))]

    def random_edge(self, rng: random.Random) -> Edge:
        if not self._edges:
            raise GraphError("empty graph")
        return self._edges[rng.randrange(len(self._edges))]

    def subgraph(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph; node order and attributes are preserved."""
        keep = set(keep)
        h = Graph()
        for u in self._nodes:
            if u in keep:
                h.add_node(u, self.size[u], self.internal[u], self.node_annotation.get(u))
        for u, v in self._edges:
            if u in keep and v in keep:
                h.add_edge(u, v, self._adj[u][v], self.edge_annotation.get((u, v)))
        h.reserve_ids(self.next_id)
        return h

    def validate(self) -> None:
        """Raise GraphError if any structural invariant is broken."""
        if set(self._nodes) != set(self._adj) or len(self._nodes) != len(self._adj):
            raise GraphError("node index out of sync")
        seen = set()
        for u, nbrs in self._adj.items():
            if self.size.get(u, 0) < 1:
                raise GraphError(f"node {u} has invalid size")
            for v, w in nbrs.items():
                if v == u:
                    raise GraphError(f"self-loop on node {u}")
                if v not in self._adj:
                    raise GraphError(f"dangling edge {{{u},{v}}}")
                if self._adj[v].get(u) != w:
                    raise GraphError(f"asymmetric edge {{{u},{v}}}")
                if not w > 0:
                    raise GraphError(f"non-positive weight on {{{u},{v}}}")
                seen.add(edge_key(u, v))
        if seen != set(self._edges) or len(seen) != len(self._edges):
            raise GraphError("edge index out of sync")


# -- traversal and whole-graph helpers ---------------------------------


def bfs_distances(g: Graph, source: int, horizon: int) -> Dict[int, int]:
    """Hop distances from ``source`` to every node within ``horizon`` hops."""
    if source not in g:
        raise GraphError("node not found")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    adj = g._adj
    dist = {source: 0}
    frontier = [source]
    depth = 0
    while frontier and depth < horizon:
        depth += 1
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in dist:
                    dist[y] = depth
                    nxt.append(y)
        frontier = nxt
    return dist


def nodes_at_distance(g: Graph, source: int, d: int) -> List[int]:
    """Nodes at exactly ``d`` hops from ``source`` (BFS stops at depth d)."""
    adj = g._adj
    seen = {source}
    frontier = [source]
    for _ in range(d):
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if not nxt:
            return []
        frontier = nxt
    return frontier


def density(g: Graph) -> float:
    n = g.number_of_nodes()
    if n < 2:
        return 0.0
    return g.number_of_edges() / (n * (n - 1) / 2)


def connected_components(g: Graph) -> List[List[int]]:
    """Components in order of their first node in ``g.nodes()``."""
    adj = g._adj
    seen = set()
    comps = []
    for s in g._nodes:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comps.append(comp)
    return comps


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component; ties go to the smallest min id."""
    comps = connected_components(g)
    if not comps:
        return Graph()
    best = max(comps, key=lambda c: (len(c), -min(c)))
    if len(best) == g.number_of_nodes():
        return g.copy()
    return g.subgraph(best)


def is_connected(g: Graph) -> bool:
    return len(connected_components(g)) <= 1


def to_networkx(g: Graph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(g.nodes())
    h.add_weighted_edges_from((u, v, g.weight(u, v)) for u, v in g.edges())
    return h


def from_networkx(h) -> Graph:
    nodes = list(h.nodes())
    index = {u: i for i, u in enumerate(nodes)}
    return Graph.from_edges(((index[u], index[v]) for u, v in h.edges()), range(len(nodes)))
