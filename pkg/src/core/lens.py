"""
Quantum spheres and lens spaces: the shift t, D = 1 + t + ... + t^(n-1), the lens
coboundary D^p - 1, and the modules on the basis N^(n-1) x Z.

The sphere module's basis points are |k_1, ..., k_n> (tag None). delta_j projects
onto k_j = 0 and epsilon_l raises k_l by one.
"""
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.complexes import dual_name
from core.fredholm import check_relations, index_k0, index_k1
from core.graphs import count_paths, lens_graph, sphere_edge, sphere_graph, sphere_vertex
from core.linalg import cokernel, determinant, element_order, generates, kernel
from models.groups import AbelianGroupPresentation, as_matrix, identity, matmul
from models.modules import FredholmModuleModel, Parity
from models.operators import BasisOperator, BasisPoint, Cell, ResidueClass, SignOperator
from utils.exceptions import IndexMismatchError, ModuleError
from utils.logger import logger


@dataclass(frozen=True)
class DualOperator:
    """An operator on vertex functions of G_n, as a matrix in the basis eta_1..eta_n."""
    n: int
    matrix: np.ndarray
    label: str = ""

    def power(self, k: int) -> "DualOperator":
        result = identity(self.n)
        for _ in range(k):
            result = matmul(result, self.matrix)
        return DualOperator(self.n, result, f"{self.label}^{k}")

    def __matmul__(self, other: "DualOperator") -> "DualOperator":
        return DualOperator(self.n, matmul(self.matrix, other.matrix))

    def __sub__(self, other: "DualOperator") -> "DualOperator":
        return DualOperator(self.n, self.matrix - other.matrix)

    def __add__(self, other: "DualOperator") -> "DualOperator":
        return DualOperator(self.n, self.matrix + other.matrix)


def dual_basis(n: int) -> Tuple[str, ...]:
    return tuple(dual_name(sphere_vertex(i)) for i in range(1, n + 1))


def unit_vector(n: int, i: int) -> Tuple[int, ...]:
    """eta_i as a vector (1-based i)."""
    return tuple(1 if j == i else 0 for j in range(1, n + 1))


def identity_operator(n: int) -> DualOperator:
    return DualOperator(n, identity(n), "1")


def t_operator(n: int) -> DualOperator:
    """(t eta)(v_i) = eta(v_{i+1}), (t eta)(v_n) = 0."""
    matrix = np.zeros((n, n), dtype=object)
    for i in range(n - 1):
        matrix[i, i + 1] = 1
    return DualOperator(n, matrix, "t")


def D_operator(n: int) -> DualOperator:
    """D = 1 + t + ... + t^(n-1), the inverse of 1 - t."""
    t = t_operator(n)
    total = identity_operator(n)
    for k in range(1, n):
        total = total + t.power(k)
    return DualOperator(n, total.matrix, "D")


def lens_coboundary(n: int, p: int) -> np.ndarray:
    """D^p - 1, the dual boundary of G_n^p in the basis eta_1..eta_n."""
    if n < 2 or p < 1:
        raise ValueError(f"lens coboundary needs n >= 2 and p >= 1, got n={n}, p={p}")
    return (D_operator(n).power(p) - identity_operator(n)).matrix


def alternative_coboundary(n: int, p: int) -> np.ndarray:
    """1 - (1 - t)^p; differs from D^p - 1 by the unit D^p."""
    one_minus_t = identity_operator(n) - t_operator(n)
    return (identity_operator(n) - one_minus_t.power(p)).matrix


def projective_coboundary(n: int) -> np.ndarray:
    """The p = 2 case written out: sum over 1 <= i < n of (i + 1) t^i."""
    t = t_operator(n)
    total = np.zeros((n, n), dtype=object)
    for i in range(1, n):
        total = total + (i + 1) * t.power(i).matrix
    return total


def geometric_sum(n: int, p: int) -> np.ndarray:
    """sum over 0 <= i < p of (1 - t)^i; injective with determinant p^n."""
    one_minus_t = identity_operator(n) - t_operator(n)
    total = np.zeros((n, n), dtype=object)
    for i in range(p):
        total = total + one_minus_t.power(i).matrix
    return total


def restricted_block(n: int, p: int) -> np.ndarray:
    """D^p - 1 from functions supported off v_1 to functions supported off v_n."""
    return as_matrix(lens_coboundary(n, p)[: n - 1, 1:], rows=n - 1, cols=n - 1)


def determinant_checks(n: int, p: int) -> Dict[str, bool]:
    """Determinants of the square blocks; the torsion of K^1 has order |det| of the restricted block."""
    block = abs(determinant(restricted_block(n, p)))
    torsion = cokernel(lens_coboundary(n, p), dual_basis(n)).torsion
    return {
        "geometric_sum_det": determinant(geometric_sum(n, p)) == p ** n,
        "restricted_block_det": block == p ** (n - 1),
        "torsion_order": math.prod(torsion) == block,
    }


def lens_k_homology(n: int, p: int) -> Tuple[AbelianGroupPresentation, AbelianGroupPresentation]:
    """(K^0, K^1) of the lens space: kernel and cokernel of D^p - 1."""
    coboundary = lens_coboundary(n, p)
    basis = dual_basis(n)
    k0, k1 = kernel(coboundary, basis), cokernel(coboundary, basis)
    logger.debug(f"lens({n},{p}): K0 rank {k0.free_rank}, K1 torsion {k1.torsion} rank {k1.free_rank}")
    return k0, k1


def path_count_index(n: int, m: int) -> Tuple[int, ...]:
    """-D^m eta_n, i.e. minus the number of length-m paths v_i -> v_n, for each i."""
    graph = sphere_graph(n)
    target = sphere_vertex(n)
    return tuple(-count_paths(graph, m, sphere_vertex(i), target) for i in range(1, n + 1))


# Sphere modules

@dataclass(frozen=True)
class HLModule:
    """The odd sphere module on N^(n-1) x Z with F the sign of k_n."""
    n: int
    module: FredholmModuleModel


def _vertex_cell(n: int, i: int, **affine) -> Cell:
    """Region of rho(v_i): k_1..k_{i-1} = 0 and k_i >= 1 (all leading zero for i = n)."""
    pattern = []
    for j in range(1, n):
        if j < i:
            pattern.append((0, 0))
        elif j == i:
            pattern.append((1, None))
        else:
            pattern.append((0, None))
    return Cell(None, None, pattern=tuple(pattern), **affine)


def _raise(n: int, l: int) -> dict:
    """Affine data of epsilon_l."""
    if l == n:
        return {"offset": 1}
    return {"shift": tuple(1 if j == l else 0 for j in range(1, n))}


def _equivariant(operator: BasisOperator, step: int) -> bool:
    return all(sum(c.shift) + c.offset == step and c.scale == 1 for c in operator.cells)


def hl_module(n: int) -> HLModule:
    """
    rho(v_i) = delta_1...delta_{i-1}(1 - delta_i), rho(v_n) = delta_1...delta_{n-1},
    rho(e_lj) = epsilon_l rho(v_j).
    """
    graph = sphere_graph(n)
    rho: Dict[str, BasisOperator] = {}
    for i in range(1, n + 1):
        rho[sphere_vertex(i)] = BasisOperator.projection([_vertex_cell(n, i)], sphere_vertex(i))
    for e in graph.edges:
        l, j = graph.vertex_index[e.src] + 1, graph.vertex_index[e.dst] + 1
        rho[e.id] = BasisOperator.injection([_vertex_cell(n, j, **_raise(n, l))], e.id)

    module = FredholmModuleModel(
        Parity.ODD, graph, rho, sign=SignOperator(), leading_dims=n - 1, tags=(None,), label=f"hl{n}"
    )
    report = check_relations(module, graph)
    if not report.passed:
        raise ModuleError(f"sphere module violates the graph relations: {report.failures[0]}")
    for e in graph.edges:
        if not _equivariant(rho[e.id], 1):
            raise ModuleError(f"rho({e.id}) does not raise the coordinate sum by one")
    return HLModule(n, module)


def path_operator(rho: Dict[str, BasisOperator], word: Tuple[str, ...], label: str) -> BasisOperator:
    """rho(e_1) rho(e_2) ... rho(e_k) for the path e_1 e_2 ... e_k."""
    operator = rho[word[-1]]
    for edge_id in reversed(word[:-1]):
        operator = rho[edge_id].compose(operator)
    return operator.relabel(label)


def eigenspace_module(hl: HLModule, p: int, m: Optional[int]) -> FredholmModuleModel:
    """
    The sphere module as a module over C*(G_n^p), restricted to the residue-m
    subspace of the coordinate sum (m None keeps the whole space).
    """
    if p < 1:
        raise ValueError(f"p must be positive, got {p}")
    if m is not None and not 0 <= m < p:
        raise ValueError(f"residue m must satisfy 0 <= m < p, got m={m}, p={p}")

    graph = lens_graph(hl.n, p)
    base = hl.module.rho
    rho = {v: base[v] for v in graph.vertices}
    for e in graph.edges:
        rho[e.id] = path_operator(base, e.word, e.id)
        if not _equivariant(rho[e.id], p):
            raise ModuleError(f"path {e.id} does not raise the coordinate sum by {p}")

    return FredholmModuleModel(
        Parity.ODD,
        graph,
        rho,
        sign=hl.module.sign,
        space=None if m is None else ResidueClass(p, m),
        leading_dims=hl.n - 1,
        tags=(None,),
        label=f"hl{hl.n}[p={p}, m={m}]",
    )


def hl_even_character(n: int, p: int = 1) -> FredholmModuleModel:
    """
    Rank-one graded module of the character psi(v_1) = psi(e_11) = 1, restricted to
    C*(G_n^p): a path acts as 1 exactly when it is e_11^p.
    """
    graph = sphere_graph(n) if p == 1 else lens_graph(n, p)
    point = Cell(None, None, lower=0, upper=0)
    loop = (sphere_edge(1, 1, n),) * p

    rho0: Dict[str, BasisOperator] = {}
    rho1: Dict[str, BasisOperator] = {}
    for v in graph.vertices:
        rho0[v] = BasisOperator.projection([point], v) if v == sphere_vertex(1) else BasisOperator.zero(v)
        rho1[v] = BasisOperator.zero(v)
    for e in graph.edges:
        rho0[e.id] = BasisOperator.injection([point], e.id) if e.word == loop else BasisOperator.zero(e.id)
        rho1[e.id] = BasisOperator.zero(e.id)

    return FredholmModuleModel(Parity.GRADED, graph, rho0, rho1, tags=(None,), label=f"psi{n}[p={p}]")


def eigenspaces_partition(p: int, points: List[BasisPoint]) -> bool:
    """Every point lies in exactly one residue class."""
    spaces = [ResidueClass(p, m) for m in range(p)]
    return all(sum(space.contains(point) for space in spaces) == 1 for point in points)


# Generators

@dataclass
class GeneratorRow:
    """Index of one eigenspace module F_m, computed from the operators and from path counts."""
    m: int
    index_vector: Tuple[int, ...]
    expected: Tuple[int, ...]
    edge_index: Dict[str, int]
    coordinates: Tuple[int, ...]
    order: Optional[int]
    difference_order: Optional[int]

    def to_dict(self) -> Dict[str, object]:
        return {
            "m": self.m,
            "index_vector": list(self.index_vector),
            "coordinates": list(self.coordinates),
            "order": self.order,
            "difference_order": self.difference_order,
        }


@dataclass
class LensGenerators:
    n: int
    p: int
    k1: AbelianGroupPresentation
    rows: List[GeneratorRow]
    generates: bool
    eigenspace_sum: bool


def lens_k1_generators(n: int, p: int) -> LensGenerators:
    """
    Classes of F_0, ..., F_{p-1} in K^1 of the lens space.

    Each index is computed on the operator model and compared with the path
    count; any disagreement raises IndexMismatchError.
    """
    hl = hl_module(n)
    graph = lens_graph(n, p)
    _, k1 = lens_k_homology(n, p)
    edge_ids = [e.id for e in graph.edges]

    rows: List[GeneratorRow] = []
    total = [0] * len(edge_ids)
    for m in range(p):
        result = index_k1(eigenspace_module(hl, p, m), graph)
        vector = tuple(result.vertex_index.as_vector())
        expected = path_count_index(n, m)
        if vector != expected:
            raise IndexMismatchError(
                f"lens({n},{p}) m={m}: operator index {list(vector)} != path count {list(expected)}",
                details={"n": n, "p": p, "m": m, "operator": list(vector), "paths": list(expected)},
            )
        total = [a + b for a, b in zip(total, result.edge_index.as_vector())]
        difference = None
        if rows:
            difference = element_order(k1, [a - b for a, b in zip(vector, rows[0].index_vector)])
        rows.append(GeneratorRow(
            m=m,
            index_vector=vector,
            expected=expected,
            edge_index=result.edge_index.to_dict(),
            coordinates=k1.reduce(vector),
            order=element_order(k1, vector),
            difference_order=difference,
        ))
        logger.debug(f"lens({n},{p}) F_{m}: index {list(vector)}")

    unrestricted = index_k1(eigenspace_module(hl, p, None), graph)
    return LensGenerators(
        n=n,
        p=p,
        k1=k1,
        rows=rows,
        generates=generates(k1, [row.index_vector for row in rows]),
        eigenspace_sum=total == unrestricted.edge_index.as_vector(),
    )


def lens_k0_generator(n: int, p: int) -> Dict[str, bool]:
    """ker(D^p - 1) = ker t = Z eta_1, and the even character has index eta_1."""
    k0, _ = lens_k_homology(n, p)
    eta_1 = unit_vector(n, 1)
    ker_t = kernel(t_operator(n).matrix, dual_basis(n))
    index = index_k0(hl_even_character(n, p), lens_graph(n, p))
    return {
        "kernel_rank_one": k0.free_rank == 1 and not k0.torsion,
        "kernel_generated_by_eta_1": k0.free_rank == 1 and generates(k0, [eta_1]),
        "kernel_is_ker_t": ker_t.free_rank == k0.free_rank and generates(ker_t, [eta_1]),
        "even_character_index": tuple(index.as_vector()) == eta_1,
    }
