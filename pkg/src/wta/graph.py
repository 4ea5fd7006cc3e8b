"""Weighted undirected simple graphs.

Node ids are dense integers in [0, n). A graph stores both the symmetric
weight matrix (for linearization / spectral work) and flattened directed
edge arrays in adjacency-list order (for fast field evaluation). Graphs are
immutable after construction.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConfigError,
    DuplicateEdgeError,
    IndexOutOfRangeError,
    InvalidProbabilityError,
    NonpositiveWeightError,
    SelfLoopError,
)

__all__ = [
    "Graph",
    "new_graph",
    "random_graph",
    "induced_subgraph",
    "connected_components",
    "is_independent_set",
    "validate_nodes",
    "graph_to_json_dict",
    "graph_from_json_dict",
    "load_graph",
    "dump_graph",
]


@dataclass(frozen=True)
class Graph:
    """Immutable weighted undirected graph without self-loops."""

    n: int
    weights: np.ndarray  # (n, n) symmetric, zero diagonal, nonnegative
    # directed edge arrays, ordered by source then target; each undirected
    # edge appears twice (once per endpoint)
    edge_src: np.ndarray = field(repr=False)
    edge_dst: np.ndarray = field(repr=False)
    edge_w: np.ndarray = field(repr=False)
    hash_hex: str = field(repr=False, default="")

    def neighbors(self, i: int) -> list[tuple[int, float]]:
        """Adjacency-list view of node i: list of (neighbor, weight)."""
        _check_node(i, self.n)
        sel = self.edge_src == i
        return list(zip(self.edge_dst[sel].tolist(), self.edge_w[sel].tolist()))

    def edges(self) -> list[tuple[int, int, float]]:
        """Undirected edge list with i < j per entry."""
        sel = self.edge_src < self.edge_dst
        return list(
            zip(
                self.edge_src[sel].tolist(),
                self.edge_dst[sel].tolist(),
                self.edge_w[sel].tolist(),
            )
        )

    @property
    def num_edges(self) -> int:
        return len(self.edge_src) // 2

    def has_edge(self, i: int, j: int) -> bool:
        _check_node(i, self.n)
        _check_node(j, self.n)
        return self.weights[i, j] > 0.0


def _check_node(i: int, n: int) -> None:
    if not (isinstance(i, (int, np.integer)) and 0 <= int(i) < n):
        raise IndexOutOfRangeError(f"node id {i!r} not in [0, {n})")


def validate_nodes(nodes: Iterable[int], n: int) -> tuple[int, ...]:
    """Sorted, duplicate-free node set with range checking."""
    out = sorted({int(i) for i in nodes})
    for i in out:
        _check_node(i, n)
    return tuple(out)


def _finish(n: int, weights: np.ndarray) -> Graph:
    src, dst = np.nonzero(weights)  # row-major order == adjacency-list order
    w = weights[src, dst]
    for a in (weights, src, dst, w):
        a.setflags(write=False)
    digest = hashlib.sha256()
    digest.update(str(n).encode())
    for i, j, wt in zip(src.tolist(), dst.tolist(), w.tolist()):
        if i < j:
            digest.update(f"{i},{j},{wt!r};".encode())
    return Graph(
        n=n,
        weights=weights,
        edge_src=src,
        edge_dst=dst,
        edge_w=w,
        hash_hex=digest.hexdigest(),
    )


def new_graph(n: int, edges: Iterable[tuple[int, int, float]]) -> Graph:
    """Build a graph from an undirected edge list (i, j, w)."""
    if not (isinstance(n, (int, np.integer)) and n > 0):
        raise ConfigError(f"agent count must be a positive integer, got {n!r}")
    weights = np.zeros((int(n), int(n)))
    seen: dict[tuple[int, int], float] = {}
    for i, j, w in edges:
        _check_node(i, n)
        _check_node(j, n)
        i, j, w = int(i), int(j), float(w)
        if i == j:
            raise SelfLoopError(f"self-loop at node {i}")
        if not w > 0.0:
            raise NonpositiveWeightError(f"edge ({i},{j}) has weight {w} <= 0")
        key = (min(i, j), max(i, j))
        if key in seen:
            if seen[key] != w:
                raise DuplicateEdgeError(
                    f"edge {key} given twice with weights {seen[key]} and {w}"
                )
            continue
        seen[key] = w
        weights[i, j] = weights[j, i] = w
    return _finish(int(n), weights)


def random_graph(
    n: int,
    edge_probability: float,
    weight_mode: str | tuple = "unit",
    seed: int = 0,
) -> Graph:
    """Seeded G(n, p) graph; each unordered pair is included independently.

    ``weight_mode`` is either "unit" or ("uniform", lo, hi) with lo > 0.
    Uses numpy's PCG64 generator; the same (n, p, weight_mode, seed) always
    produces the same graph.
    """
    p = float(edge_probability)
    if not (0.0 <= p <= 1.0):
        raise InvalidProbabilityError(f"edge probability {p} not in [0, 1]")
    if weight_mode != "unit":
        try:
            mode, lo, hi = weight_mode
        except (TypeError, ValueError):
            raise ConfigError(f"bad weight_mode {weight_mode!r}")
        if mode != "uniform" or not (0.0 < float(lo) <= float(hi)):
            raise ConfigError(f"bad weight_mode {weight_mode!r}")
        lo, hi = float(lo), float(hi)
    rng = np.random.default_rng(seed)
    weights = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                w = 1.0 if weight_mode == "unit" else rng.uniform(lo, hi)
                weights[i, j] = weights[j, i] = w
    return _finish(n, weights)


def induced_subgraph(
    g: Graph, nodes: Iterable[int]
) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph on the given nodes, relabeled to [0, |s|).

    Returns (subgraph, mapping) where mapping[k] is the original id of new
    node k. Only edges with both endpoints inside the set are kept.
    """
    s = validate_nodes(nodes, g.n)
    if not s:
        raise ConfigError("induced subgraph over the empty node set")
    idx = np.array(s)
    sub = np.array(g.weights[np.ix_(idx, idx)])
    return _finish(len(s), sub), s


def connected_components(g: Graph) -> list[tuple[int, ...]]:
    """Partition of [0, n) into maximal connected node sets (BFS over
    positive-weight edges), ordered by smallest member."""
    seen = [False] * g.n
    comps: list[tuple[int, ...]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        queue = [start]
        members = []
        while queue:
            u = queue.pop()
            members.append(u)
            for v, _w in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        comps.append(tuple(sorted(members)))
    return comps


def is_independent_set(g: Graph, nodes: Iterable[int]) -> bool:
    """True iff no edge of g has both endpoints in the node set."""
    s = set(validate_nodes(nodes, g.n))
    for i in s:
        for j, _w in g.neighbors(i):
            if j in s:
                return False
    return True


# --- JSON schema: {"n": int, "edges": [[i, j, w], ...]} with i < j ---


def graph_to_json_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [[i, j, w] for i, j, w in g.edges()]}


def graph_from_json_dict(d: dict) -> Graph:
    if not isinstance(d, dict) or "n" not in d or "edges" not in d:
        raise ConfigError('graph JSON must be {"n": int, "edges": [[i,j,w],...]}')
    n = d["n"]
    if not isinstance(n, int) or n <= 0:
        raise ConfigError(f'graph JSON field "n" must be a positive integer, got {n!r}')
    edges = []
    for entry in d["edges"]:
        if not (isinstance(entry, (list, tuple)) and len(entry) == 3):
            raise ConfigError(f"bad edge entry {entry!r}")
        i, j, w = entry
        if not (isinstance(i, int) and isinstance(j, int)):
            raise ConfigError(f"edge endpoints must be integers, got {entry!r}")
        if i == j:
            raise SelfLoopError(f"self-loop at node {i}")
        if i > j:
            raise ConfigError(f"edge entry {entry!r} must have i < j")
        edges.append((i, j, float(w)))
    return new_graph(n, edges)


def load_graph(path) -> Graph:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return graph_from_json_dict(d)


def dump_graph(g: Graph, path) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_json_dict(g), fh, sort_keys=True)
        fh.write("\n")
