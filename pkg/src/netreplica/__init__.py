"""Multiscale replication of networks into ensembles of edited look-alikes."""

from .config import EditConfig, preset
from .graph import Graph, bfs_distances, density, largest_component
from .metrics import MetricsReport, compare_ensemble, compute_metrics
from .vcycle import ReplicaReport, evolve, generate_ensemble, replicate, revise_graph

__all__ = [
    "EditConfig",
    "Graph",
    "MetricsReport",
    "ReplicaReport",
    "bfs_distances",
    "compare_ensemble",
    "compute_metrics",
    "density",
    "evolve",
    "generate_ensemble",
    "largest_component",
    "preset",
    "replicate",
    "revise_graph",
]
