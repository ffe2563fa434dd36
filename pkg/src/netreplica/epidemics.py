"""Discrete-time SEIR outbreaks on a graph.

Many runs on one graph are simulated together as rows of a state matrix;
runs never interact, so this is the same as running them one at a time.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix

from .graph import Graph, GraphError

S, E, I, R = 0, 1, 2, 3


@dataclass
class SeirParams:
    latent_mean: int = 2
    latent_jitter: int = 1
    infectious_mean: int = 9
    infectious_jitter: int = 1
    transmission_prob_per_day: float = 0.5
    horizon_days: int = 100
    initial_infected: Union[int, List[int]] = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.transmission_prob_per_day <= 1.0:
            raise ValueError("transmission_prob_per_day must be in [0, 1]")
        if self.latent_mean - self.latent_jitter < 1 or self.infectious_mean - self.infectious_jitter < 1:
            raise ValueError("durations must be >= 1 day")
        if self.horizon_days < 1:
            raise ValueError("horizon_days must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


def _adjacency(g: Graph):
    nodes = g.nodes()
    index = {u: i for i, u in enumerate(nodes)}
    rows, cols = [], []
    for u, v in g.edges():
        rows += [index[u], index[v]]
        cols += [index[v], index[u]]
    n = len(nodes)
    return nodes, index, csr_matrix((np.ones(len(rows), dtype=np.float64), (rows, cols)), shape=(n, n))


def _durations(gen: np.random.Generator, mean: int, jitter: int, size) -> np.ndarray:
    return gen.integers(mean - jitter, mean + jitter + 1, size=size)


def simulate_runs(g: Graph, params: SeirParams, runs: int, rng) -> np.ndarray:
    """Incidence (new exposures per day) for ``runs`` independent outbreaks, shape (runs, days).

    Day 0 counts the initially infected, who start in the exposed state.
    On day t every node infectious at the end of day t-1 infects each
    susceptible neighbor independently with the daily transmission probability.
    """
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    if g.number_of_nodes() == 0:
        raise GraphError("empty graph")
    nodes, index, adj = _adjacency(g)
    n, H = len(nodes), params.horizon_days
    state = np.zeros((runs, n), dtype=np.int8)
    t_infectious = np.full((runs, n), -1, dtype=np.int32)
    t_recover = np.full((runs, n), -1, dtype=np.int32)
    incidence = np.zeros((runs, H), dtype=np.int64)

    def expose(rr: np.ndarray, cc: np.ndarray, day: int) -> None:
        state[rr, cc] = E
        lat = _durations(gen, params.latent_mean, params.latent_jitter, rr.size)
        inf = _durations(gen, params.infectious_mean, params.infectious_jitter, rr.size)
        t_infectious[rr, cc] = day + lat
        t_recover[rr, cc] = day + lat + inf

    init = params.initial_infected
    if isinstance(init, int):
        if not 1 <= init <= n:
            raise ValueError("initial_infected count out of range")
        seeds = np.stack([gen.choice(n, size=init, replace=False) for _ in range(runs)])
    else:
        missing = [u for u in init if u not in index]
        if missing:
            raise GraphError(f"initial node not in graph: {missing[0]}")
        seeds = np.tile(np.array([index[u] for u in init], dtype=np.int64), (runs, 1))
    rr = np.repeat(np.arange(runs), seeds.shape[1])
    expose(rr, seeds.ravel(), 0)
    incidence[:, 0] = seeds.shape[1]

    p = params.transmission_prob_per_day
    log_escape = np.log1p(-p) if p < 1 else None
    adj_t = adj.T.tocsr()
    for day in range(1, H):
        infectious = (state == I).astype(np.float64)
        if p > 0 and infectious.any():
            pressure = np.asarray((adj_t @ infectious.T).T)  # infectious neighbor counts
            cand = (state == S) & (pressure > 0)
            if cand.any():
                if log_escape is None:
                    hit = cand
                else:
                    prob = 1.0 - np.exp(pressure * log_escape)
                    hit = cand & (gen.random(state.shape) < prob)
                r_idx, c_idx = np.nonzero(hit)
                if r_idx.size:
                    expose(r_idx, c_idx, day)
                    incidence[:, day] = np.bincount(r_idx, minlength=runs)
        state[(state == E) & (t_infectious == day)] = I
        state[(state == I) & (t_recover == day)] = R
    return incidence


def run_seir(g: Graph, params: SeirParams, rng) -> List[int]:
    """Single outbreak; daily incidence of length ``horizon_days``."""
    return simulate_runs(g, params, 1, rng)[0].tolist()


@dataclass
class IncidenceStats:
    mean: np.ndarray
    std: np.ndarray
    runs: int

    def peak_day(self) -> int:
        return int(np.argmax(self.mean))

    def peak_height(self) -> float:
        return float(self.mean.max())

    def rows(self):
        return [[d, repr(float(m)), repr(float(s))] for d, (m, s) in enumerate(zip(self.mean, self.std))]


def epidemic_ensemble(graphs: Sequence[Graph], params: SeirParams, runs_per_graph: int,
                      base_seed: int = 0) -> IncidenceStats:
    """Per-day mean and (population) standard deviation pooled over all runs of all graphs."""
    if not graphs or runs_per_graph < 1:
        raise ValueError("need at least one graph and one run")
    series = [simulate_runs(g, params, runs_per_graph, np.random.default_rng(base_seed + i))
              for i, g in enumerate(graphs)]
    allruns = np.concatenate(series, axis=0).astype(float)
    return IncidenceStats(allruns.mean(axis=0), allruns.std(axis=0), allruns.shape[0])
