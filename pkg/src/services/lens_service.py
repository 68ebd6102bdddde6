"""
Lens space service: K-homology of C(L_q(p; 1, ..., 1)) with its generators.
"""
from typing import Any, Dict

from config.settings import settings
from core.complexes import dualize, vertex_complex
from core.fredholm import check_relations, check_star_condition
from core.graphs import lens_graph
from core.lens import (
    alternative_coboundary,
    determinant_checks,
    dual_basis,
    eigenspace_module,
    hl_module,
    lens_coboundary,
    lens_k0_generator,
    lens_k1_generators,
    projective_coboundary,
)
from core.linalg import cokernel, kernel
from models.groups import equal
from services.graph_service import ServiceResult
from services.kgroups_service import group_report
from utils.exceptions import KHomologyError
from utils.logger import logger


def lens_report(n: int, p: int) -> Dict[str, Any]:
    """
    Full lens computation. Raises IndexMismatchError when an operator index
    disagrees with the path count.
    """
    generators = lens_k1_generators(n, p)
    k0 = kernel(lens_coboundary(n, p), dual_basis(n))
    hl = hl_module(n)

    alternative = alternative_coboundary(n, p)
    alt_k1 = cokernel(alternative, dual_basis(n))
    alt_k0 = kernel(alternative, dual_basis(n))

    checks: Dict[str, Any] = {
        **determinant_checks(n, p),
        **lens_k0_generator(n, p),
        "coboundary_matches_graph": equal(
            lens_coboundary(n, p), dualize(vertex_complex(lens_graph(n, p))).matrix
        ),
        "alternative_coboundary_agrees": (
            alt_k1.torsion == generators.k1.torsion
            and alt_k1.free_rank == generators.k1.free_rank
            and alt_k0.free_rank == k0.free_rank
        ),
        "index_formula": all(row.index_vector == row.expected for row in generators.rows),
        "eigenspace_sum": generators.eigenspace_sum,
        "generation": generators.generates,
        "star_condition": check_star_condition(hl.module, hl.module.graph).passed,
        "relations": check_relations(eigenspace_module(hl, p, None), lens_graph(n, p)).passed,
    }
    if p == 2:
        checks["projective_formula"] = equal(projective_coboundary(n), lens_coboundary(n, 2))

    return {
        "n": n,
        "p": p,
        "K0": group_report(k0),
        "K1": group_report(generators.k1),
        "generators": [row.to_dict() for row in generators.rows],
        "checks": checks,
    }


class LensService:

    def lens(self, n: int, p: int) -> ServiceResult:
        try:
            report = lens_report(n, p)
        except KHomologyError as exc:
            logger.error(f"lens({n},{p}) failed: {exc.message}")
            return ServiceResult.failed(exc)
        except ValueError as exc:
            logger.error(f"lens({n},{p}) rejected: {exc}")
            return ServiceResult(False, str(exc), {"error": {"code": "validation_error", "message": str(exc)}},
                                 exit_code=settings.EXIT_VALIDATION_ERROR)

        failed = [name for name, passed in report["checks"].items() if passed is not True]
        if failed:
            logger.warning(f"lens({n},{p}) checks failed: {failed}")
            message = f"lens checks failed: {', '.join(failed)}"
            return ServiceResult(False, message, report, exit_code=settings.EXIT_FAILURE)

        logger.info(f"lens({n},{p}): K1 = {report['K1']['display']}")
        return ServiceResult(True, "Lens space computed", report)


# Global singleton
lens_service = LensService()
