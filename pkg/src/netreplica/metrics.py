"""Structural statistics of a graph and ensemble comparison against an original."""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .graph import Graph, connected_components, largest_component
from .io import SCHEMA_VERSION


class MetricError(ValueError):
    pass


class ConvergenceError(MetricError):
    pass


# -- local structure ------------------------------------------------------


def triangles_and_triples(g: Graph):
    adj = g._adj
    tri3 = 0
    for u, v in g.edges():
        a, b = adj[u], adj[v]
        if len(a) > len(b):
            a, b = b, a
        tri3 += sum(1 for x in a if x in b)
    triples = sum(d * (d - 1) // 2 for d in (len(adj[u]) for u in g.nodes()))
    return tri3 // 3, triples


def clustering(g: Graph) -> float:
    """Global transitivity: 3 * triangles / connected triples."""
    tri, triples = triangles_and_triples(g)
    return 3.0 * tri / triples if triples else 0.0


def average_local_clustering(g: Graph) -> float:
    adj = g._adj
    vals = []
    for u in g.nodes():
        nb = list(adj[u])
        k = len(nb)
        if k < 2:
            vals.append(0.0)
            continue
        links = sum(1 for i in range(k) for j in range(i + 1, k) if nb[j] in adj[nb[i]])
        vals.append(2.0 * links / (k * (k - 1)))
    return float(np.mean(vals)) if vals else 0.0


def s_metric(g: Graph) -> float:
    return float(sum(g.degree(u) * g.degree(v) for u, v in g.edges()))


def newman_assortativity(g: Graph) -> Optional[float]:
    """Degree Pearson correlation over both orientations of each edge; None if undefined."""
    if g.number_of_edges() == 0:
        return None
    x = np.array([(g.degree(u), g.degree(v)) for u, v in g.edges()], dtype=float)
    a = np.concatenate([x[:, 0], x[:, 1]])
    b = np.concatenate([x[:, 1], x[:, 0]])
    va = a.var()
    if va <= 1e-15:
        return None
    return float(((a - a.mean()) * (b - b.mean())).mean() / va)


def _alpha_mle(tail: np.ndarray, d_min: int) -> float:
    denom = np.log(tail / (d_min - 0.5)).sum()
    return 1.0 + tail.size / denom


def powerlaw_fit(degrees: Sequence[int], d_min: Optional[int] = None, min_tail: int = 10):
    """Return ``(alpha, d_min)`` for the degree tail.

    alpha is the discrete MLE 1 + N / sum(ln(d / (d_min - 1/2))) over degrees
    >= d_min.  Without an explicit ``d_min`` the cut-off is the candidate
    minimizing the Kolmogorov-Smirnov distance between the empirical tail and
    the fitted survival ((d - 1/2) / (d_min - 1/2))^(1 - alpha), among
    candidates leaving at least ``min_tail`` nodes.
    """
    degs = np.sort(np.asarray([d for d in degrees if d >= 1], dtype=float))
    if degs.size < 2 or degs[0] == degs[-1]:
        raise MetricError("degenerate degree sequence")
    if d_min is not None:
        tail = degs[degs >= d_min]
        if tail.size < 2 or tail[0] == tail[-1]:
            raise MetricError("degenerate degree sequence")
        return float(_alpha_mle(tail, d_min)), int(d_min)
    best = None
    for cand in np.unique(degs):
        tail = degs[degs >= cand]
        if tail.size < min(min_tail, degs.size) or tail[0] == tail[-1]:
            break
        a = _alpha_mle(tail, cand)
        ks_vals = np.unique(tail)
        emp = 1.0 - np.searchsorted(tail, ks_vals, side="left") / tail.size
        fit = ((ks_vals - 0.5) / (cand - 0.5)) ** (1.0 - a)
        ks = float(np.abs(emp - fit).max())
        if best is None or ks < best[0]:
            best = (ks, float(a), int(cand))
    if best is None:
        raise MetricError("degenerate degree sequence")
    return best[1], best[2]


def powerlaw_exponent(g: Graph, d_min: Optional[int] = None) -> float:
    """Power-law exponent of the degree distribution (see ``powerlaw_fit``)."""
    return powerlaw_fit(list(g.degrees().values()), d_min)[0]


def degree_survival(g: Graph) -> Dict[int, float]:
    """Fraction of nodes with degree >= k, for k from min to max degree."""
    degs = np.array(list(g.degrees().values()), dtype=int)
    if degs.size == 0:
        return {}
    counts = np.bincount(degs)
    tail = np.cumsum(counts[::-1])[::-1] / degs.size
    return {int(k): float(tail[k]) for k in range(int(degs.min()), int(degs.max()) + 1)}


# -- modularity -------------------------------------------------------------


def modularity(g: Graph, partition: Iterable[Iterable[int]]) -> float:
    """Newman-Girvan modularity of a node partition (unit edge weights)."""
    m = g.number_of_edges()
    if m == 0:
        raise MetricError("modularity undefined on an edgeless graph")
    block = {}
    for i, part in enumerate(partition):
        for u in part:
            block[u] = i
    inside = np.zeros(len(set(block.values())) or 1)
    degsum = np.zeros_like(inside)
    for u, v in g.edges():
        if block[u] == block[v]:
            inside[block[u]] += 1
    for u in g.nodes():
        degsum[block[u]] += g.degree(u)
    return float((inside / m - (degsum / (2.0 * m)) ** 2).sum())


def modularity_louvain(g: Graph, rng=None):
    """Louvain partition and its modularity Q."""
    import networkx as nx

    from .graph import to_networkx

    if g.number_of_edges() == 0:
        raise MetricError("modularity undefined on an edgeless graph")
    seed = rng.getrandbits(32) if isinstance(rng, random.Random) else rng
    h = to_networkx(g)
    parts = nx.community.louvain_communities(h, weight=None, seed=seed)
    parts = [sorted(p) for p in parts]
    return parts, modularity(g, parts)


# -- distances and centralities (largest component) --------------------------


def _csr(g: Graph):
    nodes = g.nodes()
    index = {u: i for i, u in enumerate(nodes)}
    rows, cols = [], []
    for u, v in g.edges():
        rows += [index[u], index[v]]
        cols += [index[v], index[u]]
    n = len(nodes)
    mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return nodes, mat


def _distance_blocks(g: Graph, block: int = 512):
    nodes, mat = _csr(g)
    n = len(nodes)
    for start in range(0, n, block):
        idx = np.arange(start, min(n, start + block))
        yield shortest_path(mat, method="D", unweighted=True, directed=False, indices=idx)


def distance_stats(g: Graph) -> Dict[str, float]:
    """avg distance, harmonic avg distance and mean eccentricity of a connected graph."""
    n = g.number_of_nodes()
    if n < 2:
        return {"avg_distance": 0.0, "harmonic_avg_distance": 0.0, "mean_eccentricity": 0.0}
    total = 0.0
    inv_total = 0.0
    ecc = []
    for d in _distance_blocks(g):
        if np.isinf(d).any():
            raise MetricError("graph is not connected")
        total += d.sum()
        pos = d[d > 0]
        inv_total += (1.0 / pos).sum()
        ecc.append(d.max(axis=1))
    pairs = n * (n - 1)  # ordered pairs: every unordered pair counted twice above
    return {
        "avg_distance": float(total / pairs),
        "harmonic_avg_distance": float(pairs / inv_total),
        "mean_eccentricity": float(np.concatenate(ecc).mean()),
    }


def avg_distance(g: Graph) -> float:
    return distance_stats(largest_component(g))["avg_distance"]


def harmonic_avg_distance(g: Graph) -> float:
    return distance_stats(largest_component(g))["harmonic_avg_distance"]


def mean_eccentricity(g: Graph) -> float:
    return distance_stats(largest_component(g))["mean_eccentricity"]


def betweenness(g: Graph, normalized: bool = True) -> Dict[int, float]:
    """Brandes' exact betweenness for unweighted undirected graphs."""
    adj = g._adj
    nodes = g.nodes()
    bc = dict.fromkeys(nodes, 0.0)
    for s in nodes:
        order = []
        preds = {s: []}
        sigma = {s: 1}
        dist = {s: 0}
        q = deque([s])
        while q:
            v = q.popleft()
            order.append(v)
            dv = dist[v] + 1
            sv = sigma[v]
            for w in adj[v]:
                dw = dist.get(w)
                if dw is None:
                    dist[w] = dv
                    sigma[w] = sv
                    preds[w] = [v]
                    q.append(w)
                elif dw == dv:
                    sigma[w] += sv
                    preds[w].append(v)
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    n = len(nodes)
    # each unordered pair was counted from both ends
    scale = 0.5
    if normalized:
        scale = 0.5 / ((n - 1) * (n - 2) / 2) if n > 2 else 0.0
    return {u: b * scale for u, b in bc.items()}


def betweenness_avg(g: Graph) -> float:
    h = largest_component(g)
    if h.number_of_nodes() == 0:
        return 0.0
    return float(np.mean(list(betweenness(h).values())))


def eigenvector_centrality(g: Graph, tol: float = 1e-8, max_iter: int = 1000,
                           fallback: bool = True) -> Dict[int, float]:
    """Power iteration on A + I, L2-normalized; stops when the L1 change < n * tol.

    Near-regular graphs can have a spectral gap too small for ``max_iter``
    steps; with ``fallback`` the leading eigenvector then comes from Lanczos,
    otherwise ConvergenceError is raised.
    """
    nodes, mat = _csr(g)
    n = len(nodes)
    if n == 0:
        return {}
    x = np.full(n, 1.0 / math.sqrt(n))
    for _ in range(max_iter):
        y = mat @ x + x
        norm = np.linalg.norm(y)
        if norm == 0:
            raise ConvergenceError("zero vector in power iteration")
        y /= norm
        if np.abs(y - x).sum() < n * tol:
            return dict(zip(nodes, y.tolist()))
        x = y
    msg = f"power iteration did not converge in {max_iter} iterations"
    if not fallback:
        raise ConvergenceError(msg)
    return dict(zip(nodes, _leading_eigenvector(mat, x, tol, msg).tolist()))


def _leading_eigenvector(mat, x0: np.ndarray, tol: float, msg: str) -> np.ndarray:
    if mat.shape[0] < 3:
        w, v = np.linalg.eigh(mat.toarray())
        vec = v[:, -1]
    else:
        try:
            _, v = eigsh(mat.asfptype(), k=1, which="LA", v0=x0, tol=tol * 1e-2)
        except ArpackNoConvergence as exc:
            raise ConvergenceError(msg + "; Lanczos fallback also failed") from exc
        vec = v[:, 0]
    vec = np.abs(vec)
    return vec / np.linalg.norm(vec)


def eigenvector_centrality_avg(g: Graph) -> float:
    h = largest_component(g)
    return float(np.mean(list(eigenvector_centrality(h).values()))) if h.number_of_nodes() else 0.0


# -- full report ---------------------------------------------------------------

SCALAR_METRICS = (
    "num_nodes",
    "num_edges",
    "avg_degree",
    "clustering",
    "avg_local_clustering",
    "modularity",
    "avg_betweenness",
    "avg_eigenvector_centrality",
    "mean_eccentricity",
    "avg_distance",
    "harmonic_avg_distance",
    "powerlaw_exponent",
    "newman_assortativity",
    "s_metric",
    "num_components",
)

FAST_METRICS = ("num_nodes", "num_edges", "avg_degree", "clustering", "avg_local_clustering",
                "s_metric", "newman_assortativity", "powerlaw_exponent", "num_components")


@dataclass
class MetricsReport:
    num_nodes: int = 0
    num_edges: int = 0
    avg_degree: Optional[float] = None
    clustering: Optional[float] = None
    avg_local_clustering: Optional[float] = None
    modularity: Optional[float] = None
    avg_betweenness: Optional[float] = None
    avg_eigenvector_centrality: Optional[float] = None
    mean_eccentricity: Optional[float] = None
    avg_distance: Optional[float] = None
    harmonic_avg_distance: Optional[float] = None
    powerlaw_exponent: Optional[float] = None
    newman_assortativity: Optional[float] = None
    s_metric: Optional[float] = None
    num_components: int = 0
    largest_component_only: bool = False
    degree_cdf: Dict[int, float] = field(default_factory=dict)

    def value(self, name: str) -> Optional[float]:
        return getattr(self, name)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["degree_cdf"] = {str(k): v for k, v in sorted(self.degree_cdf.items())}
        d["schema_version"] = SCHEMA_VERSION
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        known = {f.name for f in fields(cls)}
        kw = {k: v for k, v in d.items() if k in known}
        kw["degree_cdf"] = {int(k): float(v) for k, v in d.get("degree_cdf", {}).items()}
        return cls(**kw)


def compute_metrics(g: Graph, rng=None, which: Optional[Sequence[str]] = None) -> MetricsReport:
    """Compute the requested metrics (all of them by default).

    Distance and centrality metrics use the largest component when ``g`` is
    disconnected; counts, degrees, clustering and modularity use all of ``g``.
    Undefined values are left as None.
    """
    want = set(SCALAR_METRICS if which is None else which)
    r = MetricsReport(num_nodes=g.number_of_nodes(), num_edges=g.number_of_edges())
    n, m = r.num_nodes, r.num_edges
    comps = connected_components(g)
    r.num_components = len(comps)
    r.largest_component_only = len(comps) > 1
    r.degree_cdf = degree_survival(g)
    if n:
        r.avg_degree = 2.0 * m / n
    if "clustering" in want:
        r.clustering = clustering(g)
    if "avg_local_clustering" in want:
        r.avg_local_clustering = average_local_clustering(g)
    if "s_metric" in want:
        r.s_metric = s_metric(g)
    if "newman_assortativity" in want:
        r.newman_assortativity = newman_assortativity(g)
    if "powerlaw_exponent" in want:
        try:
            r.powerlaw_exponent = powerlaw_exponent(g)
        except MetricError:
            r.powerlaw_exponent = None
    if "modularity" in want and m:
        r.modularity = modularity_louvain(g, rng if rng is not None else 0)[1]
    dist_keys = {"avg_distance", "harmonic_avg_distance", "mean_eccentricity"}
    need_lcc = want & (dist_keys | {"avg_betweenness", "avg_eigenvector_centrality"})
    if need_lcc and n:
        h = largest_component(g) if r.largest_component_only else g
        if want & dist_keys:
            ds = distance_stats(h)
            for k in dist_keys & want:
                setattr(r, k, ds[k])
        if "avg_betweenness" in want:
            r.avg_betweenness = float(np.mean(list(betweenness(h).values())))
        if "avg_eigenvector_centrality" in want:
            try:
                r.avg_eigenvector_centrality = float(np.mean(list(eigenvector_centrality(h).values())))
            except ConvergenceError:
                r.avg_eigenvector_centrality = None
    return r


# -- ensemble comparison ----------------------------------------------------------


@dataclass
class MetricSummary:
    name: str
    original: Optional[float]
    normalized: bool
    values: List[float]
    median: Optional[float]
    q1: Optional[float]
    q3: Optional[float]
    lo_whisker: Optional[float]
    hi_whisker: Optional[float]

    def contains_original(self) -> bool:
        ref = 1.0 if self.normalized else self.original
        if ref is None or self.lo_whisker is None:
            return False
        return self.lo_whisker <= ref <= self.hi_whisker


@dataclass
class EnsembleSummary:
    metrics: Dict[str, MetricSummary]
    replica_count: int
    degree_cdf: Dict[str, Dict[str, float]] = field(default_factory=dict)

    CSV_HEADER = ["metric", "original", "normalized", "median", "q1", "q3", "lo_whisker", "hi_whisker", "n"]

    def csv_rows(self) -> List[list]:
        rows = []
        for name, s in self.metrics.items():
            rows.append([name, _fmt(s.original), int(s.normalized), _fmt(s.median), _fmt(s.q1),
                         _fmt(s.q3), _fmt(s.lo_whisker), _fmt(s.hi_whisker), len(s.values)])
        return rows

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "replica_count": self.replica_count,
            "metrics": {k: asdict(v) for k, v in self.metrics.items()},
            "degree_cdf": self.degree_cdf,
        }


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def _box(values: Sequence[float]):
    a = np.sort(np.asarray(values, dtype=float))
    q1, med, q3 = np.percentile(a, [25, 50, 75])
    iqr = q3 - q1
    lo = a[a >= q1 - 1.5 * iqr].min()
    hi = a[a <= q3 + 1.5 * iqr].max()
    return float(med), float(q1), float(q3), float(lo), float(hi)


def compare_ensemble(original: MetricsReport, replicas: Sequence[MetricsReport],
                     names: Sequence[str] = SCALAR_METRICS) -> EnsembleSummary:
    """Per-metric boxplot statistics of replica values, normalized so the original is 1.0.

    Metrics whose original value is 0 or undefined are reported raw.
    """
    if len(replicas) < 2:
        raise ValueError("need at least 2 replicas")
    out: Dict[str, MetricSummary] = {}
    for name in names:
        orig = original.value(name)
        raw = sorted(v for v in (r.value(name) for r in replicas) if v is not None)
        normalized = orig is not None and orig != 0
        vals = [v / orig for v in raw] if normalized else list(raw)
        if vals:
            med, q1, q3, lo, hi = _box(vals)
        else:
            med = q1 = q3 = lo = hi = None
        out[name] = MetricSummary(name, None if orig is None else float(orig), normalized,
                                  [float(v) for v in vals], med, q1, q3, lo, hi)
    ks = sorted({k for r in replicas for k in r.degree_cdf} | set(original.degree_cdf))
    cdf = {}
    for k in ks:
        # survival at k is 0 above a replica's max degree and 1 below its min
        col = [_survival_at(r.degree_cdf, k) for r in replicas]
        cdf[str(k)] = {"original": _survival_at(original.degree_cdf, k),
                       "mean": float(np.mean(col)), "std": float(np.std(col))}
    return EnsembleSummary(out, len(replicas), cdf)


def _survival_at(cdf: Dict[int, float], k: int) -> float:
    if not cdf:
        return 0.0
    if k in cdf:
        return cdf[k]
    return 1.0 if k < min(cdf) else 0.0
