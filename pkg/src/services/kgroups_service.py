"""
K-theory and K-homology reports for a graph.
"""
from typing import Any, Dict

from core.complexes import (
    dualize,
    edge_complex,
    homology,
    pairing,
    vertex_class,
    vertex_complex,
)
from core.graphs import loops_without_exit
from models.graph import DirectedGraph
from models.groups import AbelianGroupPresentation
from services.graph_service import ServiceResult
from utils.exceptions import KHomologyError
from utils.formatters import format_group, format_primary, format_vector
from utils.logger import logger


def group_report(group: AbelianGroupPresentation) -> Dict[str, Any]:
    """JSON form of a presented group, with readable generator expressions."""
    report = group.to_dict()
    report["display"] = format_group(group.torsion, group.free_rank)
    report["primary"] = format_primary(group.torsion, group.free_rank)
    for generator in report["generators"]:
        generator["expression"] = format_vector(generator["vector"], group.basis)
    return report


def graph_summary(graph: DirectedGraph) -> Dict[str, Any]:
    return {
        "vertices": len(graph.vertices),
        "edges": len(graph.edges),
        "sinks": list(graph.sinks()),
    }


class KGroupsService:
    """Computes K_* from A_*(G) and K^* from its dual."""

    def kgroups(self, graph: DirectedGraph) -> ServiceResult:
        """K_0 = coker ∂ and K_1 = ker ∂, plus the classes [v] of the vertex projections."""
        try:
            k0, k1 = homology(vertex_complex(graph))
            classes = {v: list(vertex_class(k0, v)) for v in graph.vertices}
        except KHomologyError as exc:
            logger.error(f"K-theory computation failed: {exc.message}")
            return ServiceResult.failed(exc)

        report = {
            "graph": graph_summary(graph),
            "K0": group_report(k0),
            "K1": group_report(k1),
            "vertex_classes": classes,
            "loops_without_exit": [list(loop) for loop in loops_without_exit(graph)],
        }
        logger.info(f"K_0 = {report['K0']['display']}, K_1 = {report['K1']['display']}")
        return ServiceResult(True, "K-theory computed", report)

    def khomology(self, graph: DirectedGraph) -> ServiceResult:
        """
        K^0 = ker ∂^∨ and K^1 = coker ∂^∨, the edge presentation coker d^∨ of K^1,
        and a check that K^0 classes pair to zero against the image of ∂.
        """
        try:
            dual = dualize(vertex_complex(graph))
            k1, k0 = homology(dual)
            edge_k1, _ = homology(dualize(edge_complex(graph)))
            pairing_ok = self._pairing_descends(graph, k0)
        except KHomologyError as exc:
            logger.error(f"K-homology computation failed: {exc.message}")
            return ServiceResult.failed(exc)

        report = {
            "graph": graph_summary(graph),
            "K0": group_report(k0),
            "K1": group_report(k1),
            "K1_edges": group_report(edge_k1),
            "checks": {
                "pairing_descends": pairing_ok,
                "edge_presentation_agrees": (
                    edge_k1.torsion == k1.torsion and edge_k1.free_rank == k1.free_rank
                ),
            },
        }
        logger.info(f"K^0 = {report['K0']['display']}, K^1 = {report['K1']['display']}")
        return ServiceResult(True, "K-homology computed", report)

    @staticmethod
    def _pairing_descends(graph: DirectedGraph, k0: AbelianGroupPresentation) -> bool:
        """<eta, ∂x> = 0 for every K^0 generator eta and every non-sink x."""
        boundary = vertex_complex(graph).matrix
        for eta in k0.generators:
            for j in range(boundary.shape[1]):
                if pairing(eta, [int(x) for x in boundary[:, j]]) != 0:
                    return False
        return True


# Global singleton
kgroups_service = KGroupsService()
