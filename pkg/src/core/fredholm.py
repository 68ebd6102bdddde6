"""
Explicit Fredholm modules over graph algebras and their index maps.

Basis points of the graph modules are |n, v> with n in Z and the vertex as tag.
"""
from itertools import count
from typing import Dict, List, Mapping, Optional, Tuple

from config.settings import settings
from core.complexes import dualize, edge_complex, sigma, vertex_complex
from core.defects import commutator_rank, compressed_index, perturbation_rank, window_basis
from core.linalg import cokernel
from models.graph import DirectedGraph, EdgeFunction, FunctionDomain, VertexFunction
from models.groups import AbelianGroupPresentation, apply
from models.modules import (
    FredholmModuleModel,
    K1Index,
    Parity,
    RelationReport,
    StarReport,
    range_key,
    retag_operator,
    retag_point,
)
from models.operators import BasisOperator, BasisPoint, Cell, SignOperator
from utils.exceptions import MissingEtaError, ModuleError, NotHarmonicError, StarConditionError
from utils.logger import logger


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def harmonic_defect(graph: DirectedGraph, eta: Mapping[str, int]) -> Optional[Tuple[str, int, int]]:
    """First non-sink v with eta(v) != sum of eta(r(e)) over s(e)=v, as (v, expected, actual)."""
    for v in graph.nonsinks():
        expected = sum(eta[e.dst] for e in graph.out_edges(v))
        if eta[v] != expected:
            return v, expected, eta[v]
    return None


def require_eta(graph: DirectedGraph, eta: Mapping[str, int], vertices) -> None:
    missing = [v for v in vertices if v not in eta]
    if missing:
        raise MissingEtaError(f"no eta value for {', '.join(missing)}", details=missing)


# Graded modules

def _shifted_half_line(v: str, start: int) -> BasisOperator:
    return BasisOperator.projection([Cell(v, v, lower=start)], v)


def _b_cells(graph: DirectedGraph, v: str, eta: Mapping[str, int]) -> Dict[str, List[Cell]]:
    """
    Cells of rho_1(e_i) for the edges at v: bijections onto {m >= eta(v)}.

    Each b_i is n |-> i + dn for n >= N_i; the finitely many leftover domain and
    codomain points are matched in sorted order.
    """
    edges = graph.out_edges(v)
    d = len(edges)
    thresholds = [max(0, eta[e.dst], _ceil_div(eta[v] - i, d)) for i, e in enumerate(edges)]

    cells: Dict[str, List[Cell]] = {}
    leftover_domain: List[Tuple[int, int]] = []
    for i, e in enumerate(edges):
        cells[e.id] = [Cell(e.dst, v, lower=thresholds[i], scale=d, offset=i)]
        leftover_domain.extend((i, n) for n in range(eta[e.dst], thresholds[i]))

    top = max(i + d * thresholds[i] for i in range(d))
    leftover_codomain = [
        m for m in range(eta[v], top)
        if m // d < thresholds[m % d]
    ]
    if len(leftover_domain) != len(leftover_codomain):
        raise ModuleError(
            f"cannot match leftovers at {v}: {len(leftover_domain)} domain points, "
            f"{len(leftover_codomain)} codomain points"
        )
    for (i, n), m in zip(sorted(leftover_domain), leftover_codomain):
        e = edges[i]
        cells[e.id].append(Cell(e.dst, v, lower=n, upper=n, offset=m - n))
    return cells


def build_k0_module(graph: DirectedGraph, eta: VertexFunction) -> FredholmModuleModel:
    """
    Graded module with index function eta.

    rho_0(v) projects onto n >= 0 and rho_0(e_i) sends |n, r(e_i)> to |i + dn, v>;
    rho_1(v) projects onto n >= eta(v) and rho_1(e_i) is a finite-rank perturbation
    of rho_0(e_i) with range inside rho_1(v).
    """
    values = eta.values
    require_eta(graph, values, graph.vertices)
    defect = harmonic_defect(graph, values)
    if defect is not None:
        raise NotHarmonicError(defect[0], defect[1], defect[2])

    rho0: Dict[str, BasisOperator] = {}
    rho1: Dict[str, BasisOperator] = {}
    for v in graph.vertices:
        rho0[v] = _shifted_half_line(v, 0)
        rho1[v] = _shifted_half_line(v, values[v])
        edges = graph.out_edges(v)
        if not edges:
            continue
        d = len(edges)
        for i, e in enumerate(edges):
            rho0[e.id] = BasisOperator.injection([Cell(e.dst, v, lower=0, scale=d, offset=i)], e.id)
        for edge_id, cells in _b_cells(graph, v, values).items():
            rho1[edge_id] = BasisOperator.injection(cells, edge_id)

    logger.debug(f"Built graded module for eta = {dict(values)}")
    return FredholmModuleModel(Parity.GRADED, graph, rho0, rho1, label="k0")


def index_k0(module: FredholmModuleModel, graph: DirectedGraph) -> VertexFunction:
    """v |-> index of rho_1(v) rho_0(v) from rho_0(v)H to rho_1(v)H; must be harmonic."""
    if module.parity != Parity.GRADED:
        raise ModuleError("index_k0 needs a graded module")
    values = {}
    for v in graph.vertices:
        dom, cod = module.operator(v, 0), module.operator(v, 1)
        values[v] = compressed_index(None, dom, dom, cod)
    defect = harmonic_defect(graph, values)
    if defect is not None:
        raise ModuleError(
            f"index function is not harmonic at {defect[0]}: {defect[2]} != {defect[1]}",
            details=values,
        )
    return VertexFunction.on(graph, values)


def perturbation_ranks(module: FredholmModuleModel) -> Dict[str, int]:
    """rank(rho_1(x) - rho_0(x)) for every generator x."""
    return {x: perturbation_rank(module.operator(x, 0), module.operator(x, 1)) for x in module.generators()}


# Odd modules

def build_k1_module(graph: DirectedGraph, eta: VertexFunction) -> FredholmModuleModel:
    """
    Odd module with index function eta on the non-sinks.

    rho(v) projects onto the line {|n, v>}; rho(e_0) sends |n, r(e_0)> to
    |d(n - eta(v)), v> and rho(e_i), i >= 1, sends it to |i + dn, v>. F is the sign of n.
    """
    values = eta.values
    require_eta(graph, values, graph.nonsinks())

    rho: Dict[str, BasisOperator] = {}
    for v in graph.vertices:
        rho[v] = BasisOperator.projection([Cell(v, v)], v)
        edges = graph.out_edges(v)
        d = len(edges)
        for i, e in enumerate(edges):
            offset = -d * values[v] if i == 0 else i
            rho[e.id] = BasisOperator.injection([Cell(e.dst, v, scale=d, offset=offset)], e.id)

    logger.debug(f"Built odd module for eta = {dict(values)}")
    return FredholmModuleModel(Parity.ODD, graph, rho, sign=SignOperator(), label="k1")


def degenerate_module(graph: DirectedGraph) -> FredholmModuleModel:
    """The odd module with F = 1; every index vanishes."""
    zero = VertexFunction.zero(graph, FunctionDomain.NONSINKS)
    return build_k1_module(graph, zero).with_sign(SignOperator(trivial=True), "degenerate")


def star_operators(module: FredholmModuleModel) -> Dict[str, BasisOperator]:
    """The vertex projections and edge-range projections that F must commute with."""
    operators = {v: module.operator(v) for v in module.graph.vertices}
    for e in module.graph.edges:
        operators[range_key(e.id)] = module.range_projection(e.id)
    return operators


def check_star_condition(module: FredholmModuleModel, graph: DirectedGraph) -> StarReport:
    if not module.is_odd:
        raise ModuleError("condition (*) applies to odd modules")
    ranks = {
        key: commutator_rank(module.sign, operator, module.space)
        for key, operator in star_operators(module).items()
    }
    report = StarReport(ranks)
    if not report.passed:
        logger.warning(f"Condition (*) fails for {module.label or 'module'}: {report.offenders}")
    return report


def commutator_ranks(module: FredholmModuleModel) -> Dict[str, int]:
    """rank [F, rho(x)] per generator; for graded modules this is twice the perturbation rank."""
    if not module.is_odd:
        return {x: 2 * rank for x, rank in perturbation_ranks(module).items()}
    return {x: commutator_rank(module.sign, module.operator(x), module.space) for x in module.generators()}


def edge_index(module: FredholmModuleModel, edge_id: str) -> int:
    """Index of P rho(e) P from rho(e*e)PH to rho(ee*)PH."""
    T = module.operator(edge_id)
    return compressed_index(module.half_space, T, T.support(), T.range_projection(), module.space)


def k1_vertex_group(graph: DirectedGraph) -> AbelianGroupPresentation:
    """coker of the dual boundary, the vertex presentation of K^1."""
    dual = dualize(vertex_complex(graph))
    return cokernel(dual.matrix, dual.target)


def k1_edge_group(graph: DirectedGraph) -> AbelianGroupPresentation:
    """coker of the dual edge boundary, the edge presentation of K^1."""
    dual = dualize(edge_complex(graph))
    return cokernel(dual.matrix, dual.target)


def index_k1(module: FredholmModuleModel, graph: DirectedGraph) -> K1Index:
    """
    Index function of an odd module satisfying condition (*).

    The edge function is pushed down to the non-sinks by summing over edges at
    each source, and both functions are reduced to classes.
    """
    if not module.is_odd:
        raise ModuleError("index_k1 needs an odd module")
    report = check_star_condition(module, graph)
    if not report.passed:
        raise StarConditionError(report.offenders)

    edge_ids = tuple(e.id for e in graph.edges)
    edge_values = [edge_index(module, e) for e in edge_ids]
    edges = EdgeFunction.from_vector(edge_ids, edge_values)

    pushdown = sigma(graph).degree1.T
    vertex_values = apply(pushdown, edge_values) if edge_ids else tuple(0 for _ in graph.nonsinks())
    vertices = VertexFunction.from_vector(graph.nonsinks(), vertex_values, FunctionDomain.NONSINKS)

    vertex_class = k1_vertex_group(graph).reduce(vertices.as_vector())
    edge_class = k1_edge_group(graph).reduce(edges.as_vector())
    logger.debug(f"index_k1: vertex index {vertices.to_dict()}")
    return K1Index(edges, vertices, vertex_class, edge_class)


def direct_sum(first: FredholmModuleModel, second: FredholmModuleModel) -> FredholmModuleModel:
    """Block sum on disjoint copies of the two bases (tags prefixed "1" and "2")."""
    if first.parity != second.parity or first.graph != second.graph:
        raise ModuleError("direct sums need modules of the same parity over the same graph")
    if first.sign.trivial != second.sign.trivial or first.space != second.space:
        raise ModuleError("direct sums need matching sign operators and spaces")
    if first.leading_dims != second.leading_dims:
        raise ModuleError("direct sums need bases of the same shape")

    def merge(a: Mapping[str, BasisOperator], b: Mapping[str, BasisOperator]) -> Dict[str, BasisOperator]:
        merged = {}
        for x in a:
            left, right = retag_operator(a[x], "1"), retag_operator(b[x], "2")
            merged[x] = BasisOperator(left.kind, left.cells + right.cells, a[x].label)
        return merged

    redirects = {retag_point(k, "1"): retag_point(v, "1") for k, v in first.sign.redirects.items()}
    redirects.update({retag_point(k, "2"): retag_point(v, "2") for k, v in second.sign.redirects.items()})
    tags = tuple(retag_point(BasisPoint(t, (0,)), "1").tag for t in first.tags)
    tags += tuple(retag_point(BasisPoint(t, (0,)), "2").tag for t in second.tags)

    return FredholmModuleModel(
        parity=first.parity,
        graph=first.graph,
        rho=merge(first.rho, second.rho),
        rho1=merge(first.rho1, second.rho1) if first.rho1 is not None else None,
        sign=SignOperator(trivial=first.sign.trivial, redirects=redirects),
        space=first.space,
        leading_dims=first.leading_dims,
        tags=tags,
        label=f"{first.label}+{second.label}",
    )


def _first_point(operator: BasisOperator, start: int = 0) -> Optional[BasisPoint]:
    """Smallest point of the operator's support with active coordinate >= start."""
    best = None
    for cell in operator.cells:
        for n in count(start):
            if cell.upper is not None and n > cell.upper:
                break
            if cell.admits(n):
                point = BasisPoint(cell.source, cell.anchor + (n,))
                if best is None or n < best.active:
                    best = point
                break
    return best


def corrupt_sign(module: FredholmModuleModel, graph: DirectedGraph) -> FredholmModuleModel:
    """
    Break condition (*) at one point.

    Picks a vertex v emitting two edges e, f and a point b0 in the range of rho(e).
    F is changed to send b0 to a point b1 in the range of rho(f): F then still
    commutes with rho(v) but [F, rho(ee*)] has rank one.
    """
    for v in graph.vertices:
        edges = graph.out_edges(v)
        if len(edges) < 2:
            continue
        b0 = _first_point(module.range_projection(edges[0].id))
        b1 = _first_point(module.range_projection(edges[1].id))
        if b0 is None or b1 is None:
            continue
        logger.debug(f"Corrupting F at {b0} -> {b1}")
        return module.with_sign(
            SignOperator(trivial=module.sign.trivial, redirects={b0: b1}), f"{module.label}-corrupted"
        )
    raise ModuleError("no vertex emits two edges; nothing to corrupt")


def check_relations(module: FredholmModuleModel, graph: DirectedGraph,
                    window: Optional[int] = None, grade: int = 0) -> RelationReport:
    """
    Cuntz-Krieger relations at basis level on a window.

    Vertex projections must be disjoint, rho(e)*rho(e) must equal rho(r(e)), and
    each non-sink projection must be the disjoint union of its edges' ranges.
    """
    window = settings.RELATION_WINDOW if window is None else window
    points = window_basis(module.tags, window, module.leading_dims, min(window, 3))
    if module.space is not None:
        points = [p for p in points if module.space.contains(p)]

    table = module.rho if grade == 0 else module.rho1
    ranges = {e.id: table[e.id].range_projection() for e in graph.edges}
    failures: List[str] = []

    for point in points:
        owners = [v for v in graph.vertices if table[v].contains(point)]
        if len(owners) > 1:
            failures.append(f"{point} lies under several vertex projections {owners}")
        for e in graph.edges:
            if table[e.id].contains(point) != table[e.dst].contains(point):
                failures.append(f"rho({e.id})*rho({e.id}) differs from rho({e.dst}) at {point}")
        for v in graph.nonsinks():
            hits = [e.id for e in graph.out_edges(v) if ranges[e.id].contains(point)]
            if len(hits) > 1:
                failures.append(f"ranges of {hits} overlap at {point}")
            if bool(hits) != table[v].contains(point):
                failures.append(f"rho({v}) differs from the sum of its edge ranges at {point}")
        if len(failures) > 20:
            break

    if failures:
        logger.warning(f"Relation check failed for {module.label or 'module'}: {failures[0]}")
    return RelationReport(len(points), failures)
