"""Recursive coarsen / edit / uncoarsen driver, ensembles and iterated replication."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional

from .coarsening import coarsen, should_coarsen
from .config import EditConfig
from .editing import EditLog, edit_edges_and_nodes
from .graph import Graph, GraphError, largest_component
from .interpolation import interpolate

Adjustment = Callable[[Graph], Graph]


@dataclass
class ReplicaReport:
    replica: Graph
    hierarchy_depth: int
    edit_logs: List[EditLog]
    rng_seed: int
    wall_time: float = 0.0

    def edit_summary(self) -> List[dict]:
        return [{"level": i, **lg.summary()} for i, lg in enumerate(self.edit_logs)]

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "rng_seed": self.rng_seed,
            "hierarchy_depth": self.hierarchy_depth,
            "num_nodes": self.replica.number_of_nodes(),
            "num_edges": self.replica.number_of_edges(),
            "edit_logs": [lg.records for lg in self.edit_logs],
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d


@dataclass
class _Trace:
    logs: List[EditLog] = field(default_factory=list)

    def at(self, level: int) -> EditLog:
        while len(self.logs) <= level:
            self.logs.append(EditLog())
        return self.logs[level]


def keep_connected(g: Graph) -> Graph:
    """Adjustment hook: keep only the largest connected component."""
    return largest_component(g)


def revise_graph(g: Graph, level: int, cfg: EditConfig, adjust: Optional[Adjustment] = None,
                 rng: Optional[random.Random] = None, _trace: Optional[_Trace] = None) -> Graph:
    """Produce an edited replica of ``g`` treated as hierarchy level ``level``."""
    if rng is None:
        rng = random.Random(cfg.rng_seed)
    trace = _trace if _trace is not None else _Trace()
    if not should_coarsen(g, level, cfg):
        return edit_edges_and_nodes(g, level, cfg, rng, trace.at(level))
    coarse, proj = coarsen(g, rng)
    revised = revise_graph(coarse, level + 1, cfg, adjust, rng, trace)
    finer = interpolate(revised, proj, rng)
    out = edit_edges_and_nodes(finer, level, cfg, rng, trace.at(level))
    if adjust is not None:
        out = adjust(out)
        if not isinstance(out, Graph):
            raise GraphError("adjustment produced invalid graph")
        try:
            out.validate()
        except GraphError as exc:
            raise GraphError(f"adjustment produced invalid graph: {exc}") from None
    return out


def replicate(g: Graph, cfg: EditConfig, seed: Optional[int] = None,
              adjust: Optional[Adjustment] = None) -> ReplicaReport:
    seed = cfg.rng_seed if seed is None else seed
    trace = _Trace()
    t0 = time.perf_counter()
    out = revise_graph(g, 0, cfg, adjust, random.Random(seed), trace)
    elapsed = time.perf_counter() - t0
    return ReplicaReport(out, max(1, len(trace.logs)), trace.logs, seed, elapsed)


def _replicate_task(args):
    g, cfg, seed, adjust = args
    return replicate(g, cfg, seed, adjust)


def generate_ensemble(g: Graph, cfg: EditConfig, count: int, base_seed: int = 0,
                      jobs: int = 1, adjust: Optional[Adjustment] = None) -> List[ReplicaReport]:
    """``count`` replicas with seeds ``base_seed + i``, returned in seed order."""
    if count < 1:
        raise ValueError("count must be >= 1")
    tasks = [(g, cfg, base_seed + i, adjust) for i in range(count)]
    if jobs <= 1 or count == 1:
        return [_replicate_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_replicate_task, tasks))


def evolve(g: Graph, cfg: EditConfig, steps: int, rng: Optional[random.Random] = None,
           adjust: Optional[Adjustment] = None) -> List[Graph]:
    """Iterated replication: each step replicates the previous step's output.

    Returns ``[G1, ..., G_steps]``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if rng is None:
        rng = random.Random(cfg.rng_seed)
    traj = []
    cur = g
    for _ in range(steps):
        cur = revise_graph(cur, 0, cfg, adjust, rng)
        traj.append(cur)
    return traj
