"""
Module service: builds the explicit Fredholm modules for a graph and an index
function, and reports their indices and commutator ranks.
"""
from typing import Any, Dict, Mapping

from core.complexes import dualize, homology, vertex_complex
from core.fredholm import (
    build_k0_module,
    build_k1_module,
    check_relations,
    check_star_condition,
    commutator_ranks,
    index_k0,
    index_k1,
    k1_edge_group,
    k1_vertex_group,
    perturbation_ranks,
    require_eta,
)
from models.graph import DirectedGraph, FunctionDomain, VertexFunction
from services.graph_service import ServiceResult
from services.kgroups_service import group_report
from utils.exceptions import KHomologyError, UnknownVertexError
from utils.logger import logger


def _check_vertices(graph: DirectedGraph, eta: Mapping[str, int]) -> None:
    unknown = [v for v in eta if v not in graph.vertex_index]
    if unknown:
        raise UnknownVertexError(f"eta assigned to unknown vertex {', '.join(unknown)}", details=unknown)


class ModuleService:
    """Round trips eta -> module -> index for both parities."""

    def k0_module(self, graph: DirectedGraph, eta: Mapping[str, int]) -> ServiceResult:
        """Graded module for a harmonic eta on all vertices."""
        try:
            _check_vertices(graph, eta)
            require_eta(graph, eta, graph.vertices)
            module = build_k0_module(graph, VertexFunction.on(graph, eta))
            index = index_k0(module, graph)
            _, k0 = homology(dualize(vertex_complex(graph)))
            report: Dict[str, Any] = {
                "eta": {v: eta[v] for v in graph.vertices},
                "index": index.to_dict(),
                "round_trip": index.to_dict() == {v: eta[v] for v in graph.vertices},
                "class": list(k0.reduce(index.as_vector())),
                "K0": group_report(k0),
                "perturbation_ranks": perturbation_ranks(module),
                "commutator_ranks": commutator_ranks(module),
                "relations": {
                    "rho0": check_relations(module, graph, grade=0).to_dict(),
                    "rho1": check_relations(module, graph, grade=1).to_dict(),
                },
            }
        except KHomologyError as exc:
            logger.error(f"k0-module failed: {exc.message}")
            return ServiceResult.failed(exc)

        logger.info(f"k0-module: index {report['index']}")
        return ServiceResult(True, "Graded module built", report)

    def k1_module(self, graph: DirectedGraph, eta: Mapping[str, int]) -> ServiceResult:
        """Odd module for eta on the non-sinks."""
        try:
            _check_vertices(graph, eta)
            require_eta(graph, eta, graph.nonsinks())
            module = build_k1_module(graph, VertexFunction.on(graph, eta, FunctionDomain.NONSINKS))
            star = check_star_condition(module, graph)
            result = index_k1(module, graph)
            report: Dict[str, Any] = {
                "eta": {v: eta[v] for v in graph.nonsinks()},
                "star_condition": star.to_dict(),
                "commutator_ranks": commutator_ranks(module),
                "relations": check_relations(module, graph).to_dict(),
                **result.to_dict(),
                "round_trip": result.vertex_index.to_dict() == {v: eta[v] for v in graph.nonsinks()},
                "K1": group_report(k1_vertex_group(graph)),
                "K1_edges": group_report(k1_edge_group(graph)),
            }
        except KHomologyError as exc:
            logger.error(f"k1-module failed: {exc.message}")
            return ServiceResult.failed(exc)

        logger.info(f"k1-module: vertex index {report['vertex_index']}")
        return ServiceResult(True, "Odd module built", report)


# Global singleton
module_service = ModuleService()
