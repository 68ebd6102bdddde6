"""
Operator models of Fredholm modules over graph algebras, and their reports.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Mapping, Optional, Tuple

from models.graph import DirectedGraph, EdgeFunction, VertexFunction
from models.operators import BasisOperator, BasisPoint, Cell, HalfSpace, ResidueClass, SignOperator


class Parity(str, Enum):
    ODD = "odd"
    GRADED = "graded"


def range_key(edge_id: str) -> str:
    """Report key of the range projection rho(ee*)."""
    return f"{edge_id}{edge_id}*"


@dataclass(frozen=True)
class FredholmModuleModel:
    """
    A representation x |-> rho(x) of the generators of C*(G) by basis operators.

    Odd modules carry a sign operator F and optionally a residue-class restriction
    of the Hilbert space. Graded modules carry the pair (rho_0, rho_1) and the flip
    F = [[0, 1], [1, 0]], which is implicit.
    """
    parity: Parity
    graph: DirectedGraph
    rho: Mapping[str, BasisOperator]
    rho1: Optional[Mapping[str, BasisOperator]] = None
    sign: SignOperator = field(default_factory=SignOperator)
    space: Optional[ResidueClass] = None
    leading_dims: int = 0
    tags: Tuple[Optional[str], ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.parity == Parity.GRADED and self.rho1 is None:
            raise ValueError("a graded module needs rho_1")
        if not self.tags:
            object.__setattr__(self, "tags", tuple(self.graph.vertices))

    @property
    def is_odd(self) -> bool:
        return self.parity == Parity.ODD

    @property
    def half_space(self) -> Optional[HalfSpace]:
        return self.sign.half_space()

    def operator(self, generator: str, grade: int = 0) -> BasisOperator:
        table = self.rho if grade == 0 else self.rho1
        return table[generator]

    def range_projection(self, edge_id: str, grade: int = 0) -> BasisOperator:
        return self.operator(edge_id, grade).range_projection()

    def generators(self) -> List[str]:
        return list(self.graph.vertices) + [e.id for e in self.graph.edges]

    def with_sign(self, sign: SignOperator, label: str = "") -> "FredholmModuleModel":
        return replace(self, sign=sign, label=label or self.label)


@dataclass
class StarReport:
    """Commutator ranks of F with every vertex projection and edge-range projection."""
    ranks: Dict[str, int]

    @property
    def offenders(self) -> Dict[str, int]:
        return {key: rank for key, rank in self.ranks.items() if rank}

    @property
    def passed(self) -> bool:
        return not self.offenders

    def to_dict(self) -> Dict[str, object]:
        return {"passed": self.passed, "ranks": dict(self.ranks)}


@dataclass
class RelationReport:
    """Outcome of a basis-level Cuntz-Krieger check on a window."""
    checked_points: int
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> Dict[str, object]:
        return {"passed": self.passed, "checked_points": self.checked_points, "failures": list(self.failures)}


@dataclass
class K1Index:
    """Edge-level index, its vertex pushdown, and both reduced classes."""
    edge_index: EdgeFunction
    vertex_index: VertexFunction
    vertex_class: Tuple[int, ...]
    edge_class: Tuple[int, ...]

    def to_dict(self) -> Dict[str, object]:
        return {
            "edge_index": self.edge_index.to_dict(),
            "vertex_index": self.vertex_index.to_dict(),
            "vertex_class": list(self.vertex_class),
            "edge_class": list(self.edge_class),
        }


def retag_cell(cell: Cell, prefix: str) -> Cell:
    def tag(name: Optional[str]) -> str:
        return prefix if name is None else f"{prefix}:{name}"

    return replace(cell, source=tag(cell.source), target=tag(cell.target))


def retag_operator(operator: BasisOperator, prefix: str) -> BasisOperator:
    return replace(operator, cells=tuple(retag_cell(c, prefix) for c in operator.cells))


def retag_point(point: BasisPoint, prefix: str) -> BasisPoint:
    return BasisPoint(prefix if point.tag is None else f"{prefix}:{point.tag}", point.coords)


