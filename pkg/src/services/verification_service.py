"""
Verification service: the randomized invariant corpus behind `verify`.

Every suite draws from its own seeded stream, records cases and failures in
`verification_state`, and attaches a reproducer (graph and eta) to each
failure. Failing graphs are shrunk edge by edge before they are reported.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from threading import Lock
from typing import Any, Callable, Dict, List, Optional, Tuple

from config.settings import settings
from core.complexes import edge_complex, homology, homotopy_identities, vertex_complex
from core.defects import (
    certificate_radius,
    commutator_rank,
    compressed_index,
    perturbation_rank,
    window_basis,
    window_commutator_rank,
    window_difference_rank,
    window_index,
)
from core.fredholm import (
    build_k0_module,
    build_k1_module,
    check_relations,
    check_star_condition,
    corrupt_sign,
    degenerate_module,
    direct_sum,
    harmonic_defect,
    index_k0,
    index_k1,
)
from core.graphs import count_paths, path_power, sphere_graph, validate
from core.lens import determinant_checks, lens_k_homology, path_count_index, unit_vector
from core.linalg import element_order, generates, smith
from models.graph import DirectedGraph, FunctionDomain, VertexFunction
from models.groups import equal, identity, matmul
from models.modules import FredholmModuleModel
from services.corpus import harmonic_eta, nonsink_eta, random_graph, random_matrix, suite_rng
from services.lens_service import lens_report
from state.verification_state import verification_state
from utils.error_translator import error_translator
from utils.exceptions import KHomologyError
from utils.logger import logger

# A check returns None when it passes and a failure message otherwise.
Check = Callable[[], Optional[str]]


@dataclass
class VerificationResult:
    """Result container for a verification run."""
    success: bool
    message: str
    summary: Dict[str, Any] = field(default_factory=dict)
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return settings.EXIT_OK if self.success else settings.EXIT_FAILURE


def _run_check(check: Check) -> Optional[str]:
    try:
        return check()
    except KHomologyError as exc:
        return error_translator.translate(exc)


def _restrict_eta(graph: DirectedGraph, eta: Dict[str, int], nonsinks_only: bool) -> Dict[str, int]:
    keep = graph.nonsinks() if nonsinks_only else graph.vertices
    return {v: eta[v] for v in keep if v in eta}


def failure_kind(message: str) -> str:
    """The part of a failure message before the first colon."""
    return message.split(":", 1)[0].strip()


def shrink(graph: DirectedGraph, eta: Dict[str, int],
           failure: Callable[[DirectedGraph, Dict[str, int]], Optional[str]],
           message: str, nonsinks_only: bool = False,
           harmonic: bool = False) -> Tuple[DirectedGraph, Dict[str, int]]:
    """
    Drop edges one at a time while the original failure persists.

    A candidate replaces the current case only when it is a valid graph, its
    eta is still harmonic (when `harmonic` is set), and `failure` reports the
    same kind of failure as `message`.
    """
    kind = failure_kind(message)
    changed = True
    while changed:
        changed = False
        for edge in graph.edges:
            candidate = DirectedGraph(graph.vertices, tuple(e for e in graph.edges if e != edge))
            candidate_eta = _restrict_eta(candidate, eta, nonsinks_only)
            if validate(candidate):
                continue
            if harmonic and harmonic_defect(candidate, candidate_eta) is not None:
                continue
            found = failure(candidate, candidate_eta)
            if found is not None and failure_kind(found) == kind:
                graph, eta, changed = candidate, candidate_eta, True
                break
    logger.debug(f"Shrunk {kind!r} reproducer to {len(graph.edges)} edge(s)")
    return graph, eta


def _mismatch(name: str, expected: Any, actual: Any) -> Optional[str]:
    if expected != actual:
        return f"{name}: expected {expected}, got {actual}"
    return None


class VerificationService:
    """
    Runs the invariant suites. Suites are independent and may run on worker
    threads; `jobs` bounds the pool.
    """

    def __init__(self):
        self._lock = Lock()

    def run(self, seed: Optional[int] = None, jobs: int = 1, corrupt: bool = False,
            suites: Optional[List[str]] = None) -> VerificationResult:
        seed = settings.SEED if seed is None else seed
        available = self._suites(corrupt)
        names = suites or list(available)
        unknown = [n for n in names if n not in available]
        if unknown:
            return VerificationResult(False, f"Unknown suite: {', '.join(unknown)}")

        with self._lock:
            verification_state.start_run(seed)
            with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
                futures = [pool.submit(self._run_suite, name, available[name], seed) for name in names]
                for future in futures:
                    future.result()
            passed = verification_state.complete_run()

        summary = verification_state.get_summary()
        failures = verification_state.get_failures()
        message = (
            f"{summary['cases']} cases passed"
            if passed else f"{summary['failures']} of {summary['cases']} cases failed"
        )
        return VerificationResult(passed, message, summary, failures)

    def _suites(self, corrupt: bool) -> Dict[str, Callable[[str, Any], None]]:
        return {
            "snf": self._suite_snf,
            "graphs": self._suite_graphs,
            "complexes": self._suite_complexes,
            "modules": lambda name, rng: self._suite_modules(name, rng, corrupt),
            "lens": self._suite_lens,
            "determinants": self._suite_determinants,
            "negative_control": self._suite_negative_control,
        }

    def _run_suite(self, name: str, suite: Callable[[str, Any], None], seed: int) -> None:
        verification_state.start_suite(name)
        try:
            suite(name, suite_rng(seed, name))
        except Exception as exc:
            logger.exception(f"Suite {name} aborted")
            verification_state.record_failure(name, f"suite aborted: {exc}")
        verification_state.complete_suite(name)

    def _case(self, suite: str, check: Check, reproducer: Optional[Dict[str, Any]] = None) -> bool:
        verification_state.record_case(suite)
        message = _run_check(check)
        if message is not None:
            verification_state.record_failure(suite, message, reproducer)
            return False
        return True

    # ------------------------------------------------------------------
    # int-linalg
    # ------------------------------------------------------------------

    def _suite_snf(self, name: str, rng) -> None:
        for _ in range(settings.SNF_MATRICES):
            A = random_matrix(rng, settings.SNF_MAX_DIM, settings.SNF_ENTRY_BOUND)
            self._case(name, lambda A=A: self._check_snf(A), {"matrix": A.tolist()})

    @staticmethod
    def _check_snf(A) -> Optional[str]:
        s = smith(A)
        rows, cols = A.shape
        if not equal(matmul(matmul(s.U, A), s.V), s.D):
            return "U*A*V != D"
        if not equal(matmul(s.U, s.U_inv), identity(rows)) or not equal(matmul(s.V, s.V_inv), identity(cols)):
            return "transforms are not unimodular"
        for i in range(rows):
            for j in range(cols):
                if i != j and s.D[i, j] != 0:
                    return f"D has an off-diagonal entry at ({i}, {j})"
        diagonal = s.diagonal
        if any(d < 0 for d in diagonal):
            return f"negative invariant factor in {diagonal}"
        for a, b in zip(diagonal, diagonal[1:]):
            if (a == 0 and b != 0) or (a != 0 and b % a != 0):
                return f"divisibility chain broken in {diagonal}"
        return None

    # ------------------------------------------------------------------
    # graph-core and complexes
    # ------------------------------------------------------------------

    def _suite_graphs(self, name: str, rng) -> None:
        for _ in range(settings.COMPLEX_GRAPHS // 5):
            graph = random_graph(rng, settings.COMPLEX_MAX_VERTICES, settings.COMPLEX_MAX_EDGES)
            self._case(name, lambda g=graph: self._check_paths(g), {"graph": graph.to_dict()})

    @staticmethod
    def _check_paths(graph: DirectedGraph) -> Optional[str]:
        A = graph.adjacency_matrix()
        power = identity(len(graph.vertices))
        for length in range(4):
            for i, src in enumerate(graph.vertices):
                for j, dst in enumerate(graph.vertices):
                    if count_paths(graph, length, src, dst) != power[i, j]:
                        return f"count_paths({length}, {src}, {dst}) disagrees with A^{length}"
            power = matmul(power, A)
        squared = path_power(graph, 2).adjacency_matrix()
        if not equal(squared, matmul(A, A)):
            return "adjacency of G^2 is not A^2"
        return None

    def _suite_complexes(self, name: str, rng) -> None:
        for _ in range(settings.COMPLEX_GRAPHS):
            graph = random_graph(rng, settings.COMPLEX_MAX_VERTICES, settings.COMPLEX_MAX_EDGES)
            self._case(name, lambda g=graph: self._check_complexes(g), {"graph": graph.to_dict()})

    @staticmethod
    def _check_complexes(graph: DirectedGraph) -> Optional[str]:
        failed = [key for key, holds in homotopy_identities(graph).items() if not holds]
        if failed:
            return f"homotopy identities fail: {failed}"
        a0, a1 = homology(vertex_complex(graph))
        b0, b1 = homology(edge_complex(graph))
        if (a0.torsion, a0.free_rank, a1.free_rank) != (b0.torsion, b0.free_rank, b1.free_rank):
            return f"A_*(G) and B_*(G) homology differ: {a0.torsion}/{a0.free_rank} vs {b0.torsion}/{b0.free_rank}"
        return None

    # ------------------------------------------------------------------
    # fredholm-model
    # ------------------------------------------------------------------

    def _suite_modules(self, name: str, rng, corrupt: bool) -> None:
        for k in range(settings.MODULE_GRAPHS):
            graph = random_graph(rng, settings.MODULE_MAX_VERTICES, settings.MODULE_MAX_EDGES)
            even_eta = harmonic_eta(rng, graph, settings.ETA_BOUND)
            odd_eta = nonsink_eta(rng, graph, settings.ETA_BOUND)
            self._module_case(name, graph, even_eta, self._check_k0)
            self._module_case(name, graph, odd_eta, self._check_k1, nonsinks_only=True)
            if k % 10 == 0:
                other = nonsink_eta(rng, graph, settings.ETA_BOUND)
                self._case(
                    name,
                    lambda g=graph, a=odd_eta, b=other: self._check_additivity(g, a, b),
                    {"graph": graph.to_dict(), "eta": odd_eta, "other_eta": other},
                )
                self._case(name, lambda g=graph: self._check_degenerate(g), {"graph": graph.to_dict()})

        if corrupt:
            graph = sphere_graph(2)
            eta = {v: 1 for v in graph.nonsinks()}
            self._case(
                name,
                lambda: self._check_module(corrupt_sign(self._odd(graph, eta), graph), graph, eta),
                {"graph": graph.to_dict(), "eta": eta, "fixture": "corrupted"},
            )

    def _module_case(self, suite: str, graph: DirectedGraph, eta: Dict[str, int],
                     check: Callable[[DirectedGraph, Dict[str, int]], Optional[str]],
                     nonsinks_only: bool = False) -> None:
        verification_state.record_case(suite)
        message = _run_check(lambda: check(graph, eta))
        if message is None:
            return
        small_graph, small_eta = shrink(
            graph, eta, lambda g, e: _run_check(lambda: check(g, e)), message,
            nonsinks_only=nonsinks_only, harmonic=not nonsinks_only,
        )
        verification_state.record_failure(suite, message, {"graph": small_graph.to_dict(), "eta": small_eta})

    @staticmethod
    def _odd(graph: DirectedGraph, eta: Dict[str, int]) -> FredholmModuleModel:
        return build_k1_module(graph, VertexFunction.on(graph, eta, FunctionDomain.NONSINKS))

    def _check_k0(self, graph: DirectedGraph, eta: Dict[str, int]) -> Optional[str]:
        module = build_k0_module(graph, VertexFunction.on(graph, eta))
        index = index_k0(module, graph).to_dict()
        problem = _mismatch("index_k0 round trip", {v: eta[v] for v in graph.vertices}, index)
        if problem:
            return problem
        for grade in (0, 1):
            report = check_relations(module, graph, grade=grade)
            if not report.passed:
                return f"relations fail on rho_{grade}: {report.failures[0]}"

        for x in module.generators():
            T0, T1 = module.operator(x, 0), module.operator(x, 1)
            rank = perturbation_rank(T0, T1)
            tags = tuple(dict.fromkeys(T0.tags + T1.tags))
            window = window_basis(tags, settings.ORACLE_FACTOR * certificate_radius(T0, T1))
            problem = _mismatch(f"rank(rho_1({x}) - rho_0({x})) vs window oracle",
                                window_difference_rank(T0, T1, window), rank)
            if problem:
                return problem

        for v in graph.vertices:
            dom, cod = module.operator(v, 0), module.operator(v, 1)
            problem = self._index_oracle(f"index at {v}", None, dom, dom, cod)
            if problem:
                return problem
        return None

    def _check_k1(self, graph: DirectedGraph, eta: Dict[str, int]) -> Optional[str]:
        return self._check_module(self._odd(graph, eta), graph, eta)

    def _check_module(self, module: FredholmModuleModel, graph: DirectedGraph,
                      eta: Dict[str, int]) -> Optional[str]:
        result = index_k1(module, graph)
        problem = _mismatch("index_k1 round trip", {v: eta[v] for v in graph.nonsinks()},
                            result.vertex_index.to_dict())
        if problem:
            return problem
        report = check_relations(module, graph)
        if not report.passed:
            return f"relations fail: {report.failures[0]}"

        for x in module.generators():
            T = module.operator(x)
            rank = commutator_rank(module.sign, T)
            radius = certificate_radius(T, sign=module.sign)
            window = window_basis(T.tags, settings.ORACLE_FACTOR * radius)
            problem = _mismatch(f"rank [F, rho({x})] vs window oracle",
                                window_commutator_rank(module.sign, T, window), rank)
            if problem:
                return problem

        for e in graph.edges:
            T = module.operator(e.id)
            problem = self._index_oracle(f"index at {e.id}", module.half_space, T, T.support(),
                                         T.range_projection())
            if problem:
                return problem
        return None

    @staticmethod
    def _index_oracle(what: str, P, T, dom, cod) -> Optional[str]:
        """Window counts at R, 2R and 3R must all equal the certified index."""
        exact = compressed_index(P, T, dom, cod)
        radius = certificate_radius(T, dom, cod)
        tags = T.tags + dom.tags + cod.tags
        counts = [
            window_index(P, T, dom, cod, window_basis(tuple(dict.fromkeys(tags)), k * radius))
            for k in range(1, settings.ORACLE_FACTOR + 1)
        ]
        if any(c != exact for c in counts):
            return f"{what}: certified index {exact}, window counts {counts}"
        return None

    def _check_additivity(self, graph: DirectedGraph, eta: Dict[str, int],
                          other: Dict[str, int]) -> Optional[str]:
        summed = direct_sum(self._odd(graph, eta), self._odd(graph, other))
        index = index_k1(summed, graph).vertex_index.to_dict()
        return _mismatch("index of a direct sum", {v: eta[v] + other[v] for v in graph.nonsinks()}, index)

    @staticmethod
    def _check_degenerate(graph: DirectedGraph) -> Optional[str]:
        result = index_k1(degenerate_module(graph), graph)
        if not (result.edge_index.is_zero() and result.vertex_index.is_zero()):
            return f"degenerate module has nonzero index {result.vertex_index.to_dict()}"
        return None

    # ------------------------------------------------------------------
    # lens-spaces
    # ------------------------------------------------------------------

    def _suite_lens(self, name: str, rng) -> None:
        for n in range(2, settings.LENS_MAX_N + 1):
            for p in range(1, settings.LENS_MAX_P + 1):
                self._case(name, lambda n=n, p=p: self._check_lens(n, p), {"n": n, "p": p})
        for p in range(settings.LENS_MAX_P + 1, settings.LENS_TABLE_MAX_P + 1):
            self._case(name, lambda p=p: self._check_lens(2, p), {"n": 2, "p": p})
        for n in range(settings.LENS_MAX_N + 1, settings.PROJECTIVE_MAX_N + 1):
            self._case(name, lambda n=n: self._check_projective(n), {"n": n, "p": 2})

    @staticmethod
    def _check_lens(n: int, p: int) -> Optional[str]:
        report = lens_report(n, p)
        failed = [key for key, passed in report["checks"].items() if passed is not True]
        if failed:
            return f"lens({n},{p}) checks fail: {failed}"
        rows = report["generators"]
        if any(row["order"] is not None for row in rows):
            return f"lens({n},{p}): some F_m has finite order"
        if p >= 2:
            expected_torsion = [p] if n == 2 else ([2 ** (n - 1)] if p == 2 else None)
            if expected_torsion is not None and report["K1"]["torsion"] != expected_torsion:
                return f"lens({n},{p}): K1 torsion {report['K1']['torsion']}, expected {expected_torsion}"
            if report["K1"]["free_rank"] != 1:
                return f"lens({n},{p}): K1 free rank {report['K1']['free_rank']}, expected 1"
            if expected_torsion is not None and rows[1]["difference_order"] != expected_torsion[0]:
                return f"lens({n},{p}): F_1 - F_0 has order {rows[1]['difference_order']}"
        return None

    @staticmethod
    def _check_projective(n: int) -> Optional[str]:
        """Projective table beyond the operator-model range, from the path-count indices."""
        _, k1 = lens_k_homology(n, 2)
        expected = 2 ** (n - 1)
        if (k1.torsion, k1.free_rank) != ((expected,), 1):
            return f"projective n={n}: K1 torsion {k1.torsion} rank {k1.free_rank}, expected Z + Z/{expected}"
        difference = [a - b for a, b in zip(path_count_index(n, 1), path_count_index(n, 0))]
        order = element_order(k1, difference)
        return _mismatch(f"projective n={n}: order of F_1 - F_0", expected, order)

    def _suite_determinants(self, name: str, rng) -> None:
        for n in range(2, settings.DETERMINANT_MAX_N + 1):
            for p in range(1, settings.DETERMINANT_MAX_P + 1):
                self._case(name, lambda n=n, p=p: self._check_determinants(n, p), {"n": n, "p": p})

    @staticmethod
    def _check_determinants(n: int, p: int) -> Optional[str]:
        failed = [key for key, passed in determinant_checks(n, p).items() if not passed]
        if failed:
            return f"determinant checks fail for n={n}, p={p}: {failed}"
        k0, _ = lens_k_homology(n, p)
        if k0.free_rank != 1 or not generates(k0, [unit_vector(n, 1)]):
            return f"ker(D^{p} - 1) is not Z eta_1 for n={n}"
        return None

    # ------------------------------------------------------------------
    # Negative control
    # ------------------------------------------------------------------

    def _suite_negative_control(self, name: str, rng) -> None:
        """The corrupted module must be caught, with rank one at an edge range and rank zero at vertices."""
        graphs = [sphere_graph(2)]
        for _ in range(20):
            graph = random_graph(rng, settings.MODULE_MAX_VERTICES, settings.MODULE_MAX_EDGES)
            if any(graph.out_degree(v) >= 2 for v in graph.vertices):
                graphs.append(graph)
                break
        for graph in graphs:
            eta = nonsink_eta(rng, graph, settings.ETA_BOUND)
            self._case(name, lambda g=graph, e=eta: self._check_negative(g, e),
                       {"graph": graph.to_dict(), "eta": eta})

    def _check_negative(self, graph: DirectedGraph, eta: Dict[str, int]) -> Optional[str]:
        corrupted = corrupt_sign(self._odd(graph, eta), graph)
        report = check_star_condition(corrupted, graph)
        if report.passed:
            return "corrupted module passed condition (*)"
        if any(rank != 1 for rank in report.offenders.values()):
            return f"corrupted module offenders {report.offenders} are not all rank one"
        if any(v in report.offenders for v in graph.vertices):
            return f"corruption leaked into vertex projections: {report.offenders}"
        return None


# Global singleton
verification_service = VerificationService()
