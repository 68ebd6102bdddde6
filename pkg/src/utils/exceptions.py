"""
Exception hierarchy. Every error carries a code understood by the error translator.
"""
from typing import Any, Iterable, List, Optional


class KHomologyError(Exception):
    """Base class for all engine errors."""

    code = "internal_error"

    def __init__(self, message: str, *, details: Optional[Any] = None):
        super().__init__(message)
        self.message = message
        self.details = details


class GraphFormatError(KHomologyError):
    code = "parse_error"


class GraphValidationError(KHomologyError):
    code = "validation_error"

    def __init__(self, violations: Iterable[str]):
        self.violations: List[str] = list(violations)
        super().__init__("; ".join(self.violations) or "invalid graph", details=self.violations)


class UnknownVertexError(KHomologyError):
    code = "unknown_vertex"


class DimensionMismatchError(KHomologyError):
    code = "dimension_mismatch"


class NotInGroupError(KHomologyError):
    code = "not_in_group"


class NotHarmonicError(KHomologyError):
    code = "not_harmonic"

    def __init__(self, vertex: str, expected: int, actual: int):
        self.vertex = vertex
        super().__init__(
            f"eta is not harmonic at {vertex}: eta({vertex}) = {actual}, "
            f"sum over outgoing edges = {expected}"
        )


class MissingEtaError(KHomologyError):
    code = "missing_eta"


class StarConditionError(KHomologyError):
    code = "star_condition"

    def __init__(self, offenders: dict):
        self.offenders = dict(offenders)
        listing = ", ".join(f"{name} (rank {rank})" for name, rank in self.offenders.items())
        super().__init__(f"[F, rho(x)] != 0 for {listing}", details=self.offenders)


class CertificateViolation(KHomologyError):
    code = "certificate_violation"


class ModuleError(KHomologyError):
    code = "module_error"


class IndexMismatchError(KHomologyError):
    code = "index_mismatch"


class PresetError(KHomologyError):
    code = "parse_error"
