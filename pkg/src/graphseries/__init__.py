"""Analysis and generation of time series of undirected graph snapshots."""

from .graph import Snapshot, UNREACHABLE, bfs_distances, degree
from .params import ModelParams
from .series import GraphSeries, TotalGraph, build_total_graph

__all__ = [
    "GraphSeries",
    "ModelParams",
    "Snapshot",
    "TotalGraph",
    "UNREACHABLE",
    "bfs_distances",
    "build_total_graph",
    "degree",
]
