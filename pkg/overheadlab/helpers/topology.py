"""Fit analytic model parameters to a concrete simulated topology."""
import logging
from collections import Counter
from typing import Dict, List, Optional

import networkx as nx
import numpy as np

from app_utils.logging import LoggerAddTag

from .. import __title__
from ..app_settings import OVERHEADLAB_FORMULA_MODE
from ..overhead import COVERAGE_INDICES, NetworkShape

logger = LoggerAddTag(logging.getLogger(__name__), __title__)


def unit_disk_graph(positions: np.ndarray, radio_range: float, alive=None) -> nx.Graph:
    """Graph with an edge between every pair of alive nodes within range."""
    positions = np.asarray(positions, dtype=float)
    node_count = len(positions)
    if alive is None:
        alive = np.ones(node_count, dtype=bool)
    graph = nx.Graph()
    graph.add_nodes_from(int(node) for node in np.flatnonzero(alive))
    deltas = positions[:, np.newaxis, :] - positions[np.newaxis, :, :]
    distances = np.hypot(deltas[..., 0], deltas[..., 1])
    within = (distances <= radio_range) & alive[:, np.newaxis] & alive[np.newaxis, :]
    for a, b in zip(*np.nonzero(np.triu(within, k=1))):
        graph.add_edge(int(a), int(b))
    return graph


def hop_distances(graph: nx.Graph, source: int) -> Dict[int, int]:
    return dict(nx.single_source_shortest_path_length(graph, source))


def tier_counts(graph: nx.Graph, source: int, hops: int) -> List[int]:
    """Number of nodes at BFS distance 1 .. hops - 1 from source."""
    counts = Counter(hop_distances(graph, source).values())
    return [counts.get(tier, 0) for tier in range(1, hops)]


def reserve_tiers(graph: nx.Graph, source: int, hops: int) -> List[int]:
    """Tier counts from hops up to the farthest reachable node."""
    counts = Counter(hop_distances(graph, source).values())
    return [counts.get(tier, 0) for tier in range(hops, max(counts) + 1)]


def coverage_fractions(graph: nx.Graph) -> Dict[int, float]:
    """Share of nodes that have exactly i neighbors, for each coverage index i."""
    node_count = graph.number_of_nodes()
    degrees = Counter(degree for _, degree in graph.degree())
    return {
        index: degrees.get(index, 0) / node_count if node_count else 0.0
        for index in COVERAGE_INDICES
    }


def fit_shape(
    graph: nx.Graph,
    source: int,
    destination: int,
    p: float = 1.0,
    formula_mode: Optional[str] = None,
) -> Optional[NetworkShape]:
    """NetworkShape for a discovery from source to destination on graph.

    Returns None when destination cannot be reached.
    """
    try:
        hops = nx.shortest_path_length(graph, source, destination)
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        logger.warning("No path from %d to %d in topology", source, destination)
        return None
    if hops < 1:
        return None
    return NetworkShape(
        nodes=max(2, graph.number_of_nodes()),
        hops=hops,
        p=p,
        coverage=coverage_fractions(graph),
        tier_neighbors=tier_counts(graph, source, hops),
        formula_mode=formula_mode or OVERHEADLAB_FORMULA_MODE,
        tier_reserve=reserve_tiers(graph, source, hops),
    )
