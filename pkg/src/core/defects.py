"""
Defect certificates, exact commutator ranks and compressed Fredholm indices.

All counts are exact. Every cell constant is bounded by the certificate radius,
so defects of pinned cells lie within it; a guard shell beyond the radius is
scanned as a tripwire, and a defect on an unpinned cell means the defect set is
infinite.
"""
from dataclasses import dataclass
from itertools import product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sympy import Matrix

from config.settings import settings
from core.linalg import smith
from models.groups import as_matrix
from models.operators import (
    BasisOperator,
    BasisPoint,
    Cell,
    HalfSpace,
    ResidueClass,
    SignOperator,
    combine,
)
from utils.exceptions import CertificateViolation
from utils.logger import logger

Space = Optional[Union[HalfSpace, ResidueClass]]


@dataclass(frozen=True)
class DefectCertificate:
    """Finite witness for a defect set: the defects, the radius bounding them, and the clean guard shell."""
    radius: int
    guard_width: int
    defects: Tuple[BasisPoint, ...]
    shell_points: int

    @property
    def count(self) -> int:
        return len(self.defects)


def certificate_radius(*operators: BasisOperator, sign: Optional[SignOperator] = None) -> int:
    """
    A*L + L + C + 1 (+ the largest redirected point of F), where L bounds the
    active-coordinate thresholds, C the offsets and A the scales of the operators.

    A defect needs the point, its image or its preimage next to a threshold or
    next to 0, which keeps its active coordinate inside this radius.
    """
    threshold = max((op.threshold for op in operators), default=0)
    offset = max((op.max_offset for op in operators), default=0)
    scale = max((op.max_scale for op in operators), default=1)
    radius = scale * threshold + threshold + offset + 1
    if sign is not None:
        radius += sign.bound
    return radius


def _sample_leadings(cell: Cell, depth: int) -> Iterator[Tuple[int, ...]]:
    """Anchor of an unpinned cell plus offsets along each of its free coordinates."""
    anchor = cell.anchor
    yield anchor
    for free, (low, high) in enumerate(cell.pattern):
        if high is not None and high == low:
            continue
        for t in range(1, depth + 1):
            value = anchor[free] + t
            if high is not None and value > high:
                break
            yield anchor[:free] + (value,) + anchor[free + 1:]


def _line(cell: Cell, leading: Tuple[int, ...], low: int, high: int) -> Iterator[BasisPoint]:
    for n in range(low, high + 1):
        if cell.admits(n):
            yield BasisPoint(cell.source, leading + (n,))


def _scan(cells: Iterable[Cell], is_defect: Callable[[BasisPoint], bool], radius: int,
          guard: int, what: str, depth: int = 1) -> Tuple[List[BasisPoint], int]:
    defects: Dict[BasisPoint, None] = {}
    shell = 0
    reach = radius + guard
    for cell in cells:
        if cell.pinned:
            for point in _line(cell, cell.anchor, -reach, reach):
                outside = abs(point.active) > radius
                shell += outside
                if is_defect(point):
                    if outside:
                        raise CertificateViolation(
                            f"{what}: defect at {point} in the guard shell beyond radius {radius}"
                        )
                    defects[point] = None
            continue
        for leading in _sample_leadings(cell, depth):
            for point in _line(cell, leading, -reach, reach):
                if is_defect(point):
                    raise CertificateViolation(
                        f"{what}: defect at {point} on an unbounded cell, the defect set is infinite"
                    )
    return sorted(defects), shell


def certify_commutator(F: SignOperator, T: BasisOperator, space: Space = None,
                       guard_width: Optional[int] = None) -> DefectCertificate:
    """Points b in the domain of T (within `space`) where sign(Tb) differs from sign(b)."""
    guard = settings.GUARD_WIDTH if guard_width is None else guard_width
    radius = certificate_radius(T, sign=F)
    depth = space.modulus if isinstance(space, ResidueClass) else 1

    def flips(point: BasisPoint) -> bool:
        return _member(space, point) and F.sign(T.apply(point)) != F.sign(point)

    defects, shell = _scan(T.cells, flips, radius, guard, f"[F, {T.label or 'T'}]", depth)
    return DefectCertificate(radius, guard, tuple(defects), shell)


def _commutator_column(F: SignOperator, T: BasisOperator, point: BasisPoint) -> Dict[BasisPoint, int]:
    image = T.apply(point)
    forward = F.apply(image) if image is not None else {}
    backward: Dict[BasisPoint, int] = {}
    for target, coefficient in F.apply(point).items():
        moved = T.apply(target)
        if moved is not None:
            backward[moved] = backward.get(moved, 0) + coefficient
    return combine(forward, backward, signs=[1, -1])


def sparse_rank(columns: Sequence[Dict[BasisPoint, int]]) -> int:
    """Rank of a matrix given as sparse columns, through the Smith form."""
    columns = [c for c in columns if c]
    if not columns:
        return 0
    rows = sorted({point for column in columns for point in column})
    position = {point: i for i, point in enumerate(rows)}
    data = [[0] * len(columns) for _ in rows]
    for j, column in enumerate(columns):
        for point, value in column.items():
            data[position[point]][j] = value
    return smith(as_matrix(data)).rank


def commutator_rank(F: SignOperator, T: BasisOperator, space: Space = None,
                    guard_width: Optional[int] = None) -> int:
    """
    Exact rank of FT - TF.

    For diagonal F this is the number of sign flips. Redirected points of F are
    handled by assembling the finitely many nonzero columns and taking their rank.
    """
    certificate = certify_commutator(F, T, space, guard_width)
    if F.is_diagonal:
        logger.debug(f"rank [F, {T.label}] = {certificate.count} (radius {certificate.radius})")
        return certificate.count

    candidates = dict.fromkeys(certificate.defects)
    for key in F.redirects:
        candidates[key] = None
        source = T.preimage(key)
        if source is not None:
            candidates[source] = None
    columns = [_commutator_column(F, T, point) for point in candidates]
    rank = sparse_rank(columns)
    logger.debug(f"rank [F, {T.label}] = {rank} from {len(candidates)} candidate columns")
    return rank


def _member(space: Space, point: BasisPoint) -> bool:
    return space is None or space.contains(point)


def compression_defects(P: Optional[HalfSpace], T: BasisOperator, dom: BasisOperator,
                        cod: BasisOperator, space: Space = None,
                        guard_width: Optional[int] = None) -> Tuple[DefectCertificate, DefectCertificate]:
    """
    Kernel and cokernel basis points of Q T S : S H -> Q H.

    S = dom ∧ P ∧ space and Q = cod ∧ P ∧ space. P None means the identity.
    """
    guard = settings.GUARD_WIDTH if guard_width is None else guard_width
    radius = certificate_radius(T, dom, cod)
    depth = space.modulus if isinstance(space, ResidueClass) else 1

    def in_S(point: BasisPoint) -> bool:
        return dom.contains(point) and _member(P, point) and _member(space, point)

    def in_Q(point: BasisPoint) -> bool:
        return cod.contains(point) and _member(P, point) and _member(space, point)

    def lost(point: BasisPoint) -> bool:
        if not in_S(point):
            return False
        image = T.apply(point)
        return image is None or not in_Q(image)

    def missed(point: BasisPoint) -> bool:
        if not in_Q(point):
            return False
        source = T.preimage(point)
        return source is None or not in_S(source)

    label = T.label or "T"
    kernel, kernel_shell = _scan(dom.cells, lost, radius, guard, f"ker of compressed {label}", depth)
    cokernel, cokernel_shell = _scan(cod.cells, missed, radius, guard, f"coker of compressed {label}", depth)
    return (
        DefectCertificate(radius, guard, tuple(kernel), kernel_shell),
        DefectCertificate(radius, guard, tuple(cokernel), cokernel_shell),
    )


def compressed_index(P: Optional[HalfSpace], T: BasisOperator, dom: BasisOperator,
                     cod: BasisOperator, space: Space = None) -> int:
    """Fredholm index of the compression of T from (dom ∧ P)H to (cod ∧ P)H."""
    kernel, cokernel = compression_defects(P, T, dom, cod, space)
    return kernel.count - cokernel.count


def _difference_column(T0: BasisOperator, T1: BasisOperator, point: BasisPoint) -> Dict[BasisPoint, int]:
    after, before = T1.apply(point), T0.apply(point)
    return combine(
        {after: 1} if after is not None else {},
        {before: 1} if before is not None else {},
        signs=[1, -1],
    )


def perturbation_rank(T0: BasisOperator, T1: BasisOperator, guard_width: Optional[int] = None) -> int:
    """Exact rank of T1 - T0."""
    guard = settings.GUARD_WIDTH if guard_width is None else guard_width
    radius = certificate_radius(T0, T1)

    def differs(point: BasisPoint) -> bool:
        return T0.apply(point) != T1.apply(point)

    cells = T0.cells + T1.cells
    points, _ = _scan(cells, differs, radius, guard, f"{T1.label or 'T1'} - {T0.label or 'T0'}")
    return sparse_rank([_difference_column(T0, T1, point) for point in points])


# Window oracles: direct enumeration of basis points, independent of the cell scan.

def window_basis(tags: Sequence[Optional[str]], radius: int, leading_dims: int = 0,
                 leading_bound: int = 0) -> List[BasisPoint]:
    """All basis points with |active| <= radius and leading coordinates <= leading_bound."""
    points = []
    leadings = list(product(range(leading_bound + 1), repeat=leading_dims))
    for tag in tags:
        for leading in leadings:
            for n in range(-radius, radius + 1):
                points.append(BasisPoint(tag, tuple(leading) + (n,)))
    return points


def _dense_rank(columns: Sequence[Dict[BasisPoint, int]]) -> int:
    columns = [c for c in columns if c]
    rows = sorted({point for column in columns for point in column})
    if not rows:
        return 0
    position = {point: i for i, point in enumerate(rows)}
    dense = [[0] * len(columns) for _ in rows]
    for j, column in enumerate(columns):
        for point, value in column.items():
            dense[position[point]][j] = value
    return int(Matrix(dense).rank())


def window_commutator_rank(F: SignOperator, T: BasisOperator, window: Sequence[BasisPoint]) -> int:
    """Rank of [F, T] restricted to the span of `window`, by dense sympy rank."""
    return _dense_rank([_commutator_column(F, T, point) for point in window])


def window_difference_rank(T0: BasisOperator, T1: BasisOperator, window: Sequence[BasisPoint]) -> int:
    """Rank of T1 - T0 restricted to the span of `window`."""
    return _dense_rank([_difference_column(T0, T1, point) for point in window])


def window_index(P: Optional[HalfSpace], T: BasisOperator, dom: BasisOperator, cod: BasisOperator,
                 window: Sequence[BasisPoint], space: Space = None) -> int:
    """Kernel minus cokernel dimension of the compression, counted over `window` only."""
    def in_S(point):
        return dom.contains(point) and _member(P, point) and _member(space, point)

    def in_Q(point):
        return cod.contains(point) and _member(P, point) and _member(space, point)

    kernel = 0
    cokernel = 0
    for point in window:
        if in_S(point):
            image = T.apply(point)
            kernel += image is None or not in_Q(image)
        if in_Q(point):
            source = T.preimage(point)
            cokernel += source is None or not in_S(source)
    return kernel - cokernel
