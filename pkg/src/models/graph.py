"""
Directed graph data model and the integer-valued functions on its vertices and edges.

Vertex and edge order is insertion order; it fixes every matrix basis downstream.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np


@dataclass(frozen=True)
class Edge:
    """A directed edge. `path` holds the underlying edge word for path-power edges."""
    id: str
    src: str
    dst: str
    path: Tuple[str, ...] = ()

    @property
    def word(self) -> Tuple[str, ...]:
        return self.path or (self.id,)


@dataclass(frozen=True)
class DirectedGraph:
    """Finite directed multigraph. Construct freely; call `validate` before use."""
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...] = ()

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]]) -> "DirectedGraph":
        """Build from vertex ids and (id, src, dst) triples."""
        return cls(tuple(vertices), tuple(Edge(*e) if not isinstance(e, Edge) else e for e in edges))

    @cached_property
    def vertex_index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> Dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def _out_edges(self) -> Dict[str, Tuple[Edge, ...]]:
        grouped: Dict[str, List[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            grouped.setdefault(e.src, []).append(e)
        return {v: tuple(es) for v, es in grouped.items()}

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self.edge_index[edge_id]]

    def out_edges(self, vertex: str) -> Tuple[Edge, ...]:
        """Edges emitted by `vertex`, in insertion order (e_0, ..., e_{d-1})."""
        return self._out_edges.get(vertex, ())

    def out_degree(self, vertex: str) -> int:
        return len(self.out_edges(vertex))

    def sinks(self) -> Tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.out_edges(v))

    def nonsinks(self) -> Tuple[str, ...]:
        return tuple(v for v in self.vertices if self.out_edges(v))

    def is_sink(self, vertex: str) -> bool:
        return not self.out_edges(vertex)

    def adjacency_matrix(self) -> np.ndarray:
        """Entry (i, j) counts edges v_i -> v_j. Exact integers."""
        size = len(self.vertices)
        matrix = np.zeros((size, size), dtype=object)
        for e in self.edges:
            matrix[self.vertex_index[e.src], self.vertex_index[e.dst]] += 1
        return matrix

    def to_dict(self) -> Dict[str, object]:
        return {
            "vertices": list(self.vertices),
            "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in self.edges],
        }


class FunctionDomain(str, Enum):
    ALL_VERTICES = "all"
    NONSINKS = "nonsinks"
    EDGES = "edges"
    EDGES_AND_SINKS = "edges+sinks"


@dataclass(frozen=True)
class _IntegerFunction:
    values: Mapping[str, int]
    domain: FunctionDomain
    basis: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.basis:
            object.__setattr__(self, "basis", tuple(self.values))
        missing = [b for b in self.basis if b not in self.values]
        if missing:
            raise ValueError(f"function is not total on its domain, missing {missing}")

    def __getitem__(self, key: str) -> int:
        return self.values[key]

    def as_vector(self) -> List[int]:
        return [int(self.values[b]) for b in self.basis]

    def is_zero(self) -> bool:
        return all(self.values[b] == 0 for b in self.basis)

    def to_dict(self) -> Dict[str, int]:
        return {b: int(self.values[b]) for b in self.basis}


class VertexFunction(_IntegerFunction):
    """Element of ZV^dual (domain ALL_VERTICES) or ZV_ns^dual (domain NONSINKS)."""

    @classmethod
    def on(cls, graph: DirectedGraph, values: Mapping[str, int],
           domain: FunctionDomain = FunctionDomain.ALL_VERTICES) -> "VertexFunction":
        basis = graph.vertices if domain == FunctionDomain.ALL_VERTICES else graph.nonsinks()
        return cls(dict(values), domain, tuple(basis))

    @classmethod
    def from_vector(cls, basis: Sequence[str], vector: Sequence[int],
                    domain: FunctionDomain = FunctionDomain.ALL_VERTICES) -> "VertexFunction":
        return cls({b: int(x) for b, x in zip(basis, vector)}, domain, tuple(basis))

    @classmethod
    def zero(cls, graph: DirectedGraph,
             domain: FunctionDomain = FunctionDomain.ALL_VERTICES) -> "VertexFunction":
        basis = graph.vertices if domain == FunctionDomain.ALL_VERTICES else graph.nonsinks()
        return cls({v: 0 for v in basis}, domain, tuple(basis))


class EdgeFunction(_IntegerFunction):
    """Element of ZE^dual, or of Z[E + V_s]^dual when sinks are included."""

    @classmethod
    def from_vector(cls, basis: Sequence[str], vector: Sequence[int],
                    include_sinks: bool = False) -> "EdgeFunction":
        domain = FunctionDomain.EDGES_AND_SINKS if include_sinks else FunctionDomain.EDGES
        return cls({b: int(x) for b, x in zip(basis, vector)}, domain, tuple(basis))
