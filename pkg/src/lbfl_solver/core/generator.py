"""
Deterministic random LBFL instance generation.

Three families:
    line   - integer points on a line, |x - y|
    plane  - integer points in the plane, L1 or rounded-up Euclidean
             (closed under shortest paths so the rounding keeps the triangle inequality)
    graph  - shortest-path metric of a random connected weighted graph

The generator only creates inputs; it never solves them.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, Tuple

import networkx as nx
import numpy as np

from ..errors import MalformedInputError
from .instance import Facility, LbflInstance

logger = logging.getLogger(__name__)

FAMILIES = ("line", "plane", "graph")


@dataclass(frozen=True)
class GeneratorProfile:
    """Bounds for generated instances. Size ranges are inclusive (lo, hi)."""

    family: str = "plane"
    facilities: Tuple[int, int] = (1, 7)
    clients: Tuple[int, int] = (1, 10)
    coord_max: int = 20
    cost_range: Tuple[int, int] = (0, 30)
    lower_bound_range: Tuple[int, int] = (0, 5)
    feasible_bias: bool = True
    norm: str = "l1"
    edge_prob: float = 0.3
    weight_max: int = 10
    scale: int = 1

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise MalformedInputError(f"unknown generator family '{self.family}'")
        if self.norm not in ("l1", "euclidean"):
            raise MalformedInputError(f"unknown norm '{self.norm}'")
        for name in ("facilities", "clients", "cost_range", "lower_bound_range"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo:
                raise MalformedInputError(f"bad range for {name}: ({lo}, {hi})")


PROFILES: Dict[str, GeneratorProfile] = {
    "tiny": GeneratorProfile(facilities=(1, 4), clients=(1, 6), lower_bound_range=(0, 3)),
    "suite": GeneratorProfile(),
    "line": GeneratorProfile(family="line", coord_max=40),
    "euclid": GeneratorProfile(norm="euclidean"),
    "graph": GeneratorProfile(family="graph"),
    "tcsd": GeneratorProfile(facilities=(2, 5), clients=(2, 8), lower_bound_range=(0, 4)),
    "medium": GeneratorProfile(facilities=(8, 15), clients=(15, 40), lower_bound_range=(0, 8)),
}


def get_profile(name: str) -> GeneratorProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise MalformedInputError(f"unknown profile '{name}' (choose from {', '.join(sorted(PROFILES))})")


def shortest_path_closure(matrix: np.ndarray) -> np.ndarray:
    """Metric closure of a nonnegative symmetric matrix (Floyd-Warshall)."""
    size = matrix.shape[0]
    graph = nx.Graph()
    graph.add_nodes_from(range(size))
    # zero entries are kept as edges so duplicate points stay at distance 0
    graph.add_weighted_edges_from(
        (u, v, int(matrix[u, v])) for u in range(size) for v in range(u + 1, size))
    return nx.floyd_warshall_numpy(graph, nodelist=list(range(size)), weight="weight").astype(np.int64)


def _ceil_sqrt(value) -> int:
    root = math.isqrt(int(value))
    return root if root * root == value else root + 1


def induced_metric(points: np.ndarray, norm: str = "l1") -> np.ndarray:
    """Integer metric induced by integer coordinates."""
    if len(points) == 0:
        return np.zeros((0, 0), dtype=np.int64)
    diff = points[:, None, :] - points[None, :, :]
    if norm == "l1":
        return np.abs(diff).sum(axis=2).astype(np.int64)
    squared = (diff ** 2).sum(axis=2)
    rounded = np.vectorize(_ceil_sqrt, otypes=[np.int64])(squared)
    return shortest_path_closure(rounded.astype(np.int64))


def _graph_metric(rng: np.random.Generator, size: int, profile: GeneratorProfile) -> np.ndarray:
    if size <= 1:
        return np.zeros((size, size), dtype=np.int64)
    graph = nx.gnp_random_graph(size, profile.edge_prob, seed=int(rng.integers(2 ** 31)))
    order = rng.permutation(size)
    graph.add_edges_from(zip(order[:-1].tolist(), order[1:].tolist()))
    for u, v in sorted(graph.edges()):
        graph[u][v]["weight"] = int(rng.integers(1, profile.weight_max + 1))
    return nx.floyd_warshall_numpy(graph, nodelist=list(range(size)), weight="weight").astype(np.int64)


def generate_instance(seed: int, profile: GeneratorProfile = GeneratorProfile()) -> LbflInstance:
    """Generate an instance; identical (seed, profile) pairs give identical instances.

    Args:
        seed: random seed.
        profile: size/cost/bound ranges and metric family.

    Returns:
        An instance whose metric passes ``validate_metric``.
    """
    rng = np.random.default_rng(seed)
    m = int(rng.integers(profile.facilities[0], profile.facilities[1] + 1))
    n = int(rng.integers(profile.clients[0], profile.clients[1] + 1))
    size = m + n

    if profile.family == "graph":
        dist = _graph_metric(rng, size, profile)
    else:
        dims = 1 if profile.family == "line" else 2
        points = rng.integers(0, profile.coord_max + 1, size=(size, dims))
        dist = induced_metric(points, "l1" if profile.family == "line" else profile.norm)
    dist = dist * profile.scale

    lb_lo, lb_hi = profile.lower_bound_range
    if profile.feasible_bias:
        lb_hi = min(lb_hi, n)
        lb_lo = min(lb_lo, lb_hi)
    costs = rng.integers(profile.cost_range[0], profile.cost_range[1] + 1, size=m) * profile.scale
    bounds = rng.integers(lb_lo, lb_hi + 1, size=m)

    facilities = tuple(Facility(f"f{i}", int(costs[i]), int(bounds[i])) for i in range(m))
    clients = tuple(f"c{j}" for j in range(n))
    logger.debug(f"Generated {profile.family} instance seed={seed}: |F|={m}, |C|={n}")
    return LbflInstance(facilities, clients, dist.tolist(), profile.scale)


def generate_suite(seeds, profile: GeneratorProfile) -> Iterator[Tuple[int, LbflInstance]]:
    for seed in seeds:
        yield seed, generate_instance(seed, profile)


__all__ = [
    "FAMILIES",
    "GeneratorProfile",
    "PROFILES",
    "get_profile",
    "shortest_path_closure",
    "induced_metric",
    "generate_instance",
    "generate_suite",
]
