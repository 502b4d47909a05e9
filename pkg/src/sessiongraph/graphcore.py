"""Session graphs and their connectivity measures.

Nodes are resources, indexed densely in sorted resource-string order so that
a graph does not depend on the order its sessions arrived in. Edges are the
distinct ordered transitions seen inside sessions; repeats accumulate into
an edge weight and ``(r, r)`` transitions are tallied per node instead of
becoming edges.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from .errors import DegenerateGraph
from .sessionizer import Session


class SessionGraph:
    def __init__(self, resources, src, dst, weight, requests, self_loops):
        self.resources = list(resources)
        self.index = {r: i for i, r in enumerate(self.resources)}
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.weight = np.asarray(weight, dtype=np.int64)
        self.requests = np.asarray(requests, dtype=np.int64)
        self.self_loops = np.asarray(self_loops, dtype=np.int64)
        if np.any(self.src == self.dst):
            raise ValueError("self-edges are not allowed in the edge set")

    @property
    def n_nodes(self) -> int:
        return len(self.resources)

    @property
    def n_edges(self) -> int:
        return len(self.src)

    @property
    def self_loop_count(self) -> int:
        return int(self.self_loops.sum())

    def edges(self) -> list[tuple[str, str]]:
        return [(self.resources[a], self.resources[b]) for a, b in zip(self.src, self.dst)]

    def adjacency(self) -> sparse.csr_matrix:
        """Unweighted 0/1 adjacency matrix, rows are sources."""
        n = self.n_nodes
        data = np.ones(self.n_edges, dtype=np.int8)
        return sparse.csr_matrix((data, (self.src, self.dst)), shape=(n, n))

    def __eq__(self, other):
        if not isinstance(other, SessionGraph):
            return NotImplemented
        return (self.resources == other.resources
                and all(np.array_equal(getattr(self, a), getattr(other, a))
                        for a in ("src", "dst", "weight", "requests", "self_loops")))

    def __repr__(self):
        return f"SessionGraph(nodes={self.n_nodes}, edges={self.n_edges}, self_loops={self.self_loop_count})"


def _sorted_edges(src, dst, weight):
    order = np.lexsort((dst, src))
    return src[order], dst[order], weight[order]


def build_graph(sessions: Iterable[Session]) -> SessionGraph:
    requests: Counter = Counter()
    transitions: Counter = Counter()
    for s in sessions:
        res = s.resources
        requests.update(res)
        transitions.update(zip(res, res[1:]))

    resources = sorted(requests)
    index = {r: i for i, r in enumerate(resources)}
    n = len(resources)
    loops = np.zeros(n, dtype=np.int64)
    src, dst, weight = [], [], []
    for (a, b), w in transitions.items():
        if a == b:
            loops[index[a]] += w
        else:
            src.append(index[a])
            dst.append(index[b])
            weight.append(w)
    src, dst, weight = _sorted_edges(np.array(src, dtype=np.int64),
                                     np.array(dst, dtype=np.int64),
                                     np.array(weight, dtype=np.int64))
    counts = np.array([requests[r] for r in resources], dtype=np.int64)
    return SessionGraph(resources, src, dst, weight, counts, loops)


def degrees(graph: SessionGraph) -> tuple[np.ndarray, np.ndarray]:
    """Unweighted ``(in_degree, out_degree)`` per node."""
    n = graph.n_nodes
    return (np.bincount(graph.dst, minlength=n).astype(np.int64),
            np.bincount(graph.src, minlength=n).astype(np.int64))


def density(graph: SessionGraph) -> float:
    n = graph.n_nodes
    if n < 2:
        raise DegenerateGraph("density needs at least two nodes")
    return graph.n_edges / (n * (n - 1))


def mean_degree(graph: SessionGraph) -> float:
    if graph.n_nodes == 0:
        raise DegenerateGraph("mean degree of an empty graph")
    return graph.n_edges / graph.n_nodes


def _reciprocated_edges(graph: SessionGraph) -> int:
    n = graph.n_nodes
    forward = graph.src * n + graph.dst
    backward = graph.dst * n + graph.src
    return int(np.isin(backward, forward).sum())


def reciprocity(graph: SessionGraph, mode: str = "edge_ratio") -> float:
    """Share of transitions that also occur in reverse.

    ``edge_ratio`` divides the number of reciprocated edges by ``|E|``.
    ``pair_formula`` counts each mutually linked pair once and normalises by
    the ``n(n-1)/2`` possible pairs, i.e. ``2 * pairs / (n (n - 1))``.
    """
    n = graph.n_nodes
    if n < 2:
        raise DegenerateGraph("reciprocity needs at least two nodes")
    mutual = _reciprocated_edges(graph)
    if mode == "edge_ratio":
        return mutual / graph.n_edges if graph.n_edges else 0.0
    if mode == "pair_formula":
        pairs = mutual // 2
        return 2 * pairs / (n * (n - 1))
    raise ValueError(f"unknown reciprocity mode {mode!r}")


@dataclass(frozen=True)
class ComponentPartition:
    mode: str
    assignment: np.ndarray
    sizes: np.ndarray

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def largest(self) -> int:
        return int(self.sizes.max()) if len(self.sizes) else 0

    def members(self) -> list[list[int]]:
        groups = [[] for _ in range(self.count)]
        for node, cid in enumerate(self.assignment):
            groups[cid].append(node)
        return groups


def connected_components(graph: SessionGraph, mode: str = "weak") -> ComponentPartition:
    """Weak or strong components; ids follow the smallest member node index."""
    if mode not in ("weak", "strong"):
        raise ValueError(f"unknown connectivity mode {mode!r}")
    if graph.n_nodes == 0:
        empty = np.zeros(0, dtype=np.int64)
        return ComponentPartition(mode, empty, empty)
    _, labels = csgraph.connected_components(graph.adjacency(), directed=True, connection=mode)
    _, first = np.unique(labels, return_index=True)
    # scipy labels are arbitrary; renumber in order of least member
    relabel = np.empty(len(first), dtype=np.int64)
    relabel[np.argsort(first, kind="stable")] = np.arange(len(first))
    assignment = relabel[labels]
    sizes = np.bincount(assignment).astype(np.int64)
    return ComponentPartition(mode, assignment, sizes)


def component_summary(graph: SessionGraph) -> dict:
    weak = connected_components(graph, "weak")
    strong = connected_components(graph, "strong")
    return {
        "wcc_count": weak.count,
        "scc_count": strong.count,
        "largest_wcc": weak.largest,
        "largest_scc": strong.largest,
    }


def subgraph(graph: SessionGraph, nodes: Sequence[int]) -> SessionGraph:
    """Induced subgraph; kept nodes retain their relative order."""
    keep = np.unique(np.asarray(nodes, dtype=np.int64))
    remap = np.full(graph.n_nodes, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    mask = (remap[graph.src] >= 0) & (remap[graph.dst] >= 0)
    return SessionGraph(
        [graph.resources[i] for i in keep],
        remap[graph.src[mask]],
        remap[graph.dst[mask]],
        graph.weight[mask],
        graph.requests[keep],
        graph.self_loops[keep],
    )


def top_k_degree_subgraph(graph: SessionGraph, k: int) -> SessionGraph:
    """Induced subgraph on the ``k`` nodes with largest in+out degree.

    Ties go to the smaller node index. Compose with
    ``largest_component(..., "weak")`` for the usual visualisation cut.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    k_in, k_out = degrees(graph)
    total = k_in + k_out
    order = np.lexsort((np.arange(graph.n_nodes), -total))
    return subgraph(graph, order[:k])


def largest_component(graph: SessionGraph, mode: str = "weak") -> SessionGraph:
    part = connected_components(graph, mode)
    if part.count == 0:
        return graph
    biggest = int(np.argmax(part.sizes))
    return subgraph(graph, np.flatnonzero(part.assignment == biggest))


def graph_metrics(graph: SessionGraph) -> dict:
    """Table-style summary; ratio metrics are None where undefined."""
    n = graph.n_nodes
    return {
        "nodes": n,
        "edges": graph.n_edges,
        "self_loops": graph.self_loop_count,
        "density": density(graph) if n >= 2 else None,
        "mean_degree": mean_degree(graph) if n >= 1 else None,
        "reciprocity_edge_ratio": reciprocity(graph, "edge_ratio") if n >= 2 else None,
        "reciprocity_pair_formula": reciprocity(graph, "pair_formula") if n >= 2 else None,
    }
