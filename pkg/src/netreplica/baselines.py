"""Comparison generators, optionally parameterized to look like an input graph."""

from __future__ import annotations

import logging
import math
import random
from typing import List, Sequence

import numpy as np

from .graph import Graph, density, is_connected

log = logging.getLogger(__name__)


def erdos_renyi(n: int, p: float, rng: random.Random) -> Graph:
    """G(n, p) using geometric skipping over the upper triangle."""
    if n < 1 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 1 and 0 <= p <= 1")
    g = Graph.from_edges((), range(n))
    if p == 0.0:
        return g
    if p == 1.0:
        for u in range(n):
            for v in range(u + 1, n):
                g.add_edge(u, v)
        return g
    lp = math.log(1.0 - p)
    v, w = 1, -1
    while v < n:
        w += 1 + int(math.log(1.0 - rng.random()) / lp)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            g.add_edge(v, w)
    return g


def barabasi_albert(n: int, m: int, rng: random.Random) -> Graph:
    """Preferential attachment from an edgeless core of ``m`` nodes.

    Node ``m`` links to every core node; later arrivals pick ``m`` distinct
    targets with probability proportional to degree.
    """
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    g = Graph.from_edges((), range(n))
    ends: List[int] = []
    targets = list(range(m))
    for new in range(m, n):
        for t in targets:
            g.add_edge(new, t)
        ends.extend(targets)
        ends.extend([new] * m)
        chosen = set()
        while len(chosen) < m and new + 1 < n:
            chosen.add(ends[rng.randrange(len(ends))])
        targets = sorted(chosen)
    return g


def watts_strogatz(n: int, k: int, p: float, rng: random.Random) -> Graph:
    """Ring lattice with ``k`` nearest neighbors, each edge's far end rewired with prob ``p``."""
    if k % 2 or k >= n:
        raise ValueError("k must be even and < n")
    g = Graph.from_edges((), range(n))
    for j in range(1, k // 2 + 1):
        for u in range(n):
            g.add_edge(u, (u + j) % n)
    if p <= 0:
        return g
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if rng.random() < p and g.has_edge(u, v):
                if g.degree(u) >= n - 1:
                    continue
                w = rng.randrange(n)
                while w == u or g.has_edge(u, w):
                    w = rng.randrange(n)
                g.remove_edge(u, v)
                g.add_edge(u, w)
    return g


def chung_lu(degrees: Sequence[float], rng: random.Random) -> Graph:
    """Independent edges with probability min(1, d_i d_j / sum(d)), no self-loops."""
    w = np.asarray(degrees, dtype=float)
    n = w.size
    g = Graph.from_edges((), range(n))
    total = w.sum()
    if total <= 0 or n < 2:
        return g
    gen = np.random.default_rng(rng.getrandbits(64))
    for i in range(n - 1):
        p = np.minimum(1.0, w[i] * w[i + 1:] / total)
        hits = np.nonzero(gen.random(n - i - 1) < p)[0]
        for j in hits:
            g.add_edge(i, i + 1 + int(j))
    return g


def edge_rewire(g: Graph, fraction: float, rng: random.Random) -> Graph:
    """Delete ``fraction`` of the edges and add as many uniform random non-edges."""
    out = g.copy()
    k = int(round(fraction * out.number_of_edges()))
    nodes = out.nodes()
    n = len(nodes)
    if n * (n - 1) // 2 <= out.number_of_edges():
        return out
    for _ in range(k):
        u, v = out.random_edge(rng)
        out.remove_edge(u, v)
    added = 0
    while added < k:
        a, b = nodes[rng.randrange(n)], nodes[rng.randrange(n)]
        if a != b and not out.has_edge(a, b):
            out.add_edge(a, b)
            added += 1
    return out


def edge_swap(g: Graph, fraction: float, rng: random.Random, keep_connected: bool = False,
              loop_safety_factor: int = 10) -> Graph:
    """Degree-preserving double-edge swaps touching ``fraction`` of the edges.

    Picks {x1,x2}, {y1,y2} and replaces them with {x1,y1}, {x2,y2}; swaps that
    would create a loop or duplicate (or disconnect, with ``keep_connected``)
    are rejected.
    """
    out = g.copy()
    goal = int(math.ceil(fraction * out.number_of_edges() / 2))
    if out.number_of_edges() < 2:
        return out
    done = attempts = 0
    while done < goal and attempts < loop_safety_factor * goal:
        attempts += 1
        x1, x2 = out.random_edge(rng)
        y1, y2 = out.random_edge(rng)
        if rng.random() < 0.5:
            y1, y2 = y2, y1
        if len({x1, x2, y1, y2}) < 4 or out.has_edge(x1, y1) or out.has_edge(x2, y2):
            continue
        out.remove_edge(x1, x2)
        out.remove_edge(y1, y2)
        out.add_edge(x1, y1)
        out.add_edge(x2, y2)
        if keep_connected and not is_connected(out):
            out.remove_edge(x1, y1)
            out.remove_edge(x2, y2)
            out.add_edge(x1, x2)
            out.add_edge(y1, y2)
            continue
        done += 1
    if done < goal:
        log.warning("edge_swap: only %d of %d swaps completed", done, goal)
    return out


MODELS = ("er", "ba", "ws", "cl", "rewire", "swap")


def matched(model: str, g: Graph, rng: random.Random) -> Graph:
    """Generator ``model`` parameterized to match ``g``'s size and density."""
    n, m = g.number_of_nodes(), g.number_of_edges()
    if model == "er":
        return erdos_renyi(n, density(g), rng)
    if model == "ba":
        k = max(1, min(n - 1, int(round(m / n)))) if n else 1
        return barabasi_albert(n, k, rng)
    if model == "ws":
        return watts_strogatz(n, 4, density(g), rng)
    if model == "cl":
        return chung_lu([g.degree(u) for u in g.nodes()], rng)
    if model == "rewire":
        return edge_rewire(g, 0.30, rng)
    if model == "swap":
        return edge_swap(g, 0.30, rng, keep_connected=is_connected(g))
    raise ValueError(f"unknown model {model!r}; expected one of {', '.join(MODELS)}")
