"""
Two-term complexes of a finite graph: the vertex complex A_*(G), the edge complex
B_*(G), their duals, the comparison maps sigma and tau, and the homotopies h and k.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from core.linalg import cokernel, kernel
from models.graph import DirectedGraph
from models.groups import AbelianGroupPresentation, as_matrix, identity, matmul
from utils.exceptions import DimensionMismatchError
from utils.logger import logger

DUAL_MARKER = "^"


def dual_name(name: str) -> str:
    return name[:-len(DUAL_MARKER)] if name.endswith(DUAL_MARKER) else name + DUAL_MARKER


@dataclass(frozen=True)
class TwoTermComplex:
    """
    A map between the degree-1 and degree-0 groups.

    For chain complexes `matrix` goes degree 1 -> degree 0 (columns indexed by
    `degree1`); for cochain complexes it goes degree 0 -> degree 1 (columns indexed
    by `degree0`).
    """
    degree1: Tuple[str, ...]
    degree0: Tuple[str, ...]
    matrix: np.ndarray
    is_cochain: bool = False

    def __post_init__(self):
        expected = (len(self.degree0), len(self.degree1))
        if self.is_cochain:
            expected = expected[::-1]
        if self.matrix.shape != expected:
            raise DimensionMismatchError(
                f"boundary matrix is {self.matrix.shape}, bases need {expected}"
            )

    @property
    def source(self) -> Tuple[str, ...]:
        return self.degree0 if self.is_cochain else self.degree1

    @property
    def target(self) -> Tuple[str, ...]:
        return self.degree1 if self.is_cochain else self.degree0


@dataclass(frozen=True)
class ComplexMap:
    """Chain map between chain complexes, given degreewise."""
    source: TwoTermComplex
    target: TwoTermComplex
    degree1: np.ndarray
    degree0: np.ndarray

    def commutes(self) -> bool:
        left = matmul(self.target.matrix, self.degree1)
        right = matmul(self.degree0, self.source.matrix)
        return bool((left == right).all())


@dataclass(frozen=True)
class Homotopy:
    """Map from the degree-0 group of `complex` to its degree-1 group."""
    complex: TwoTermComplex
    matrix: np.ndarray


def _zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def vertex_complex(graph: DirectedGraph) -> TwoTermComplex:
    """A_*(G): Z V_ns -> Z V, v |-> sum over s(e)=v of r(e), minus v."""
    nonsinks = graph.nonsinks()
    index = graph.vertex_index
    boundary = _zeros(len(graph.vertices), len(nonsinks))
    for j, v in enumerate(nonsinks):
        for e in graph.out_edges(v):
            boundary[index[e.dst], j] += 1
        boundary[index[v], j] -= 1
    return TwoTermComplex(nonsinks, graph.vertices, boundary)


def edge_complex_basis(graph: DirectedGraph) -> Tuple[str, ...]:
    """Degree-0 basis of B_*(G): edges, then sinks."""
    return tuple(e.id for e in graph.edges) + graph.sinks()


def edge_complex(graph: DirectedGraph) -> TwoTermComplex:
    """
    B_*(G): Z E -> Z[E + V_s].

    d(e) is the sum of the edges leaving r(e), minus e, when r(e) emits edges, and
    r(e) - e when r(e) is a sink.
    """
    degree0 = edge_complex_basis(graph)
    position = {name: i for i, name in enumerate(degree0)}
    boundary = _zeros(len(degree0), len(graph.edges))
    for j, e in enumerate(graph.edges):
        if graph.is_sink(e.dst):
            boundary[position[e.dst], j] += 1
        else:
            for f in graph.out_edges(e.dst):
                boundary[position[f.id], j] += 1
        boundary[position[e.id], j] -= 1
    return TwoTermComplex(tuple(e.id for e in graph.edges), degree0, boundary)


def sigma(graph: DirectedGraph) -> ComplexMap:
    """A_*(G) -> B_*(G): a non-sink goes to the sum of its edges, a sink to itself."""
    source, target = vertex_complex(graph), edge_complex(graph)
    row = {name: i for i, name in enumerate(target.degree0)}

    degree1 = _zeros(len(target.degree1), len(source.degree1))
    for j, v in enumerate(source.degree1):
        for e in graph.out_edges(v):
            degree1[graph.edge_index[e.id], j] += 1

    degree0 = _zeros(len(target.degree0), len(source.degree0))
    for j, v in enumerate(source.degree0):
        if graph.is_sink(v):
            degree0[row[v], j] = 1
        else:
            for e in graph.out_edges(v):
                degree0[row[e.id], j] += 1
    return ComplexMap(source, target, degree1, degree0)


def tau(graph: DirectedGraph) -> ComplexMap:
    """B_*(G) -> A_*(G): an edge goes to its range, a sink to itself."""
    source, target = edge_complex(graph), vertex_complex(graph)
    nonsink_row = {v: i for i, v in enumerate(target.degree1)}

    degree1 = _zeros(len(target.degree1), len(source.degree1))
    for j, e in enumerate(graph.edges):
        if e.dst in nonsink_row:
            degree1[nonsink_row[e.dst], j] = 1

    degree0 = _zeros(len(target.degree0), len(source.degree0))
    for j, name in enumerate(source.degree0):
        vertex = graph.edge(name).dst if name in graph.edge_index else name
        degree0[graph.vertex_index[vertex], j] = 1
    return ComplexMap(source, target, degree1, degree0)


def homotopy_h(graph: DirectedGraph) -> Homotopy:
    """Z[E + V_s] -> Z E: e |-> e, sinks |-> 0."""
    complex_ = edge_complex(graph)
    matrix = _zeros(len(complex_.degree1), len(complex_.degree0))
    for i in range(len(graph.edges)):
        matrix[i, i] = 1
    return Homotopy(complex_, matrix)


def homotopy_k(graph: DirectedGraph) -> Homotopy:
    """Z V -> Z V_ns: non-sinks fixed, sinks |-> 0."""
    complex_ = vertex_complex(graph)
    matrix = _zeros(len(complex_.degree1), len(complex_.degree0))
    for i, v in enumerate(complex_.degree1):
        matrix[i, graph.vertex_index[v]] = 1
    return Homotopy(complex_, matrix)


def dualize(complex_: TwoTermComplex) -> TwoTermComplex:
    """Apply Hom(-, Z): transpose the matrix and mark the basis names as dual."""
    return TwoTermComplex(
        tuple(dual_name(b) for b in complex_.degree1),
        tuple(dual_name(b) for b in complex_.degree0),
        as_matrix(complex_.matrix.T, rows=complex_.matrix.shape[1], cols=complex_.matrix.shape[0]),
        is_cochain=not complex_.is_cochain,
    )


def homology(complex_: TwoTermComplex) -> Tuple[AbelianGroupPresentation, AbelianGroupPresentation]:
    """
    (cokernel, kernel) of the complex's map.

    For A_*(G) these are K_0 and K_1 of C*(G); for the dual they are K^1 and K^0.
    """
    quotient = cokernel(complex_.matrix, complex_.target)
    sub = kernel(complex_.matrix, complex_.source)
    logger.debug(
        f"homology: coker torsion {quotient.torsion} rank {quotient.free_rank}, ker rank {sub.free_rank}"
    )
    return quotient, sub


def homotopy_identities(graph: DirectedGraph) -> dict:
    """
    Evaluate the comparison identities between A_*(G) and B_*(G).

    Keys name the identity; values are True when it holds exactly.
    """
    s, t = sigma(graph), tau(graph)
    h, k = homotopy_h(graph).matrix, homotopy_k(graph).matrix
    d, boundary = s.target.matrix, s.source.matrix

    def holds(left: np.ndarray, right: np.ndarray) -> bool:
        return left.shape == right.shape and bool((left == right).all())

    return {
        "sigma_chain_map": s.commutes(),
        "tau_chain_map": t.commutes(),
        "sigma0_tau0": holds(matmul(s.degree0, t.degree0) - identity(len(s.target.degree0)), matmul(d, h)),
        "sigma1_tau1": holds(matmul(s.degree1, t.degree1) - identity(len(s.target.degree1)), matmul(h, d)),
        "tau0_sigma0": holds(matmul(t.degree0, s.degree0) - identity(len(s.source.degree0)), matmul(boundary, k)),
        "tau1_sigma1": holds(matmul(t.degree1, s.degree1) - identity(len(s.source.degree1)), matmul(k, boundary)),
    }


def vertex_class(group: AbelianGroupPresentation, vertex: str) -> Tuple[int, ...]:
    """Coordinates of the class [v] of a basis element (e.g. a vertex projection in K_0)."""
    if vertex not in group.basis:
        raise DimensionMismatchError(f"{vertex!r} is not a basis element of the group")
    return group.reduce([1 if b == vertex else 0 for b in group.basis])


def pairing(eta: Sequence[int], x: Sequence[int]) -> int:
    """<eta, x> = sum eta(v) x(v); descends to coker(boundary) when eta is harmonic."""
    if len(eta) != len(x):
        raise DimensionMismatchError("pairing vectors have different lengths")
    return sum(int(a) * int(b) for a, b in zip(eta, x))
