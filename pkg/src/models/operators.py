"""
Exact operators on countable orthonormal bases.

A basis point is a vertex tag plus an integer coordinate tuple whose last entry
(the active coordinate) ranges over Z and whose leading entries range over N.
Every operator is a finite union of cells; a cell is an affine partial map

    (tag, k_1..k_r, n)  |->  (tag', k_1 + s_1, ..., k_r + s_r, a*n + c)

defined on a box of leading coordinates and a residue class/interval of n.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from sympy import mod_inverse
from sympy.ntheory.modular import solve_congruence

Bound = Optional[int]


@dataclass(frozen=True, order=True)
class BasisPoint:
    tag: Optional[str]
    coords: Tuple[int, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("a basis point needs at least the active coordinate")
        if any(x < 0 for x in self.coords[:-1]):
            raise ValueError(f"leading coordinates must be nonnegative: {self.coords}")

    @property
    def active(self) -> int:
        return self.coords[-1]

    @property
    def leading(self) -> Tuple[int, ...]:
        return self.coords[:-1]

    def __str__(self) -> str:
        inner = ",".join(str(x) for x in self.coords)
        return f"|{inner}>" if self.tag is None else f"|{inner};{self.tag}>"


def _max_bound(a: Bound, b: Bound) -> Bound:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def _min_bound(a: Bound, b: Bound) -> Bound:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class Cell:
    source: Optional[str]
    target: Optional[str]
    pattern: Tuple[Tuple[int, Bound], ...] = ()
    lower: Bound = None
    upper: Bound = None
    modulus: int = 1
    residue: int = 0
    scale: int = 1
    offset: int = 0
    shift: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.scale < 1 or self.modulus < 1:
            raise ValueError("cell scale and modulus must be positive")
        if not self.shift:
            object.__setattr__(self, "shift", (0,) * len(self.pattern))
        if len(self.shift) != len(self.pattern):
            raise ValueError("shift and pattern lengths differ")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @property
    def pinned(self) -> bool:
        """True when every leading coordinate is fixed, so the region is one line."""
        return all(high is not None and low == high for low, high in self.pattern)

    @property
    def is_empty(self) -> bool:
        if any(high is not None and high < low for low, high in self.pattern):
            return True
        if self.lower is not None and self.upper is not None:
            first = self.lower + (self.residue - self.lower) % self.modulus
            return first > self.upper
        return False

    @property
    def anchor(self) -> Tuple[int, ...]:
        return tuple(low for low, _ in self.pattern)

    @property
    def threshold(self) -> int:
        """Largest |bound| on the active coordinate, 0 when unbounded."""
        return max((abs(b) for b in (self.lower, self.upper) if b is not None), default=0)

    def admits(self, n: int) -> bool:
        if self.lower is not None and n < self.lower:
            return False
        if self.upper is not None and n > self.upper:
            return False
        return (n - self.residue) % self.modulus == 0

    def contains(self, point: BasisPoint) -> bool:
        if point.tag != self.source or len(point.leading) != len(self.pattern):
            return False
        for x, (low, high) in zip(point.leading, self.pattern):
            if x < low or (high is not None and x > high):
                return False
        return self.admits(point.active)

    def map(self, point: BasisPoint) -> BasisPoint:
        leading = tuple(x + s for x, s in zip(point.leading, self.shift))
        return BasisPoint(self.target, leading + (self.scale * point.active + self.offset,))

    def inverse(self, point: BasisPoint) -> Optional[BasisPoint]:
        """The unique preimage of `point` in this cell, if any."""
        if point.tag != self.target or len(point.leading) != len(self.pattern):
            return None
        leading = tuple(x - s for x, s in zip(point.leading, self.shift))
        if any(x < 0 for x in leading):
            return None
        delta = point.active - self.offset
        if delta % self.scale:
            return None
        candidate = BasisPoint(self.source, leading + (delta // self.scale,))
        return candidate if self.contains(candidate) else None

    def support(self) -> "Cell":
        return replace(self, target=self.source, scale=1, offset=0, shift=())

    def image(self) -> "Cell":
        """Identity cell on the range of this cell."""
        pattern = tuple(
            (low + s, None if high is None else high + s)
            for (low, high), s in zip(self.pattern, self.shift)
        )
        return Cell(
            source=self.target,
            target=self.target,
            pattern=pattern,
            lower=None if self.lower is None else self.scale * self.lower + self.offset,
            upper=None if self.upper is None else self.scale * self.upper + self.offset,
            modulus=self.scale * self.modulus,
            residue=self.scale * self.residue + self.offset,
        )

    def then(self, other: "Cell") -> Optional["Cell"]:
        """The cell of `other` applied after `self`, or None when they never meet."""
        if self.target != other.source or len(self.pattern) != len(other.pattern):
            return None

        pattern = []
        for (low, high), (o_low, o_high), s in zip(self.pattern, other.pattern, self.shift):
            new_low = max(low, o_low - s, 0)
            new_high = _min_bound(high, None if o_high is None else o_high - s)
            if new_high is not None and new_high < new_low:
                return None
            pattern.append((new_low, new_high))

        a, c = self.scale, self.offset
        lower = self.lower
        upper = self.upper
        if other.lower is not None:
            lower = _max_bound(lower, _ceil_div(other.lower - c, a))
        if other.upper is not None:
            upper = _min_bound(upper, (other.upper - c) // a)

        # a*n + c = other.residue (mod other.modulus)
        g = gcd(a, other.modulus)
        rhs = other.residue - c
        if rhs % g:
            return None
        reduced = other.modulus // g
        step = 0 if reduced == 1 else int((rhs // g) * mod_inverse(a // g, reduced) % reduced)
        if reduced == 1:
            residue, modulus = self.residue, self.modulus
        elif self.modulus == 1:
            residue, modulus = step, reduced
        else:
            solution = solve_congruence((self.residue, self.modulus), (step, reduced))
            if solution is None:
                return None
            residue, modulus = int(solution[0]), int(solution[1])

        cell = Cell(
            source=self.source,
            target=other.target,
            pattern=tuple(pattern),
            lower=lower,
            upper=upper,
            modulus=modulus,
            residue=residue,
            scale=other.scale * a,
            offset=other.scale * c + other.offset,
            shift=tuple(s + t for s, t in zip(self.shift, other.shift)),
        )
        return None if cell.is_empty else cell


class OperatorKind(str, Enum):
    PARTIAL_INJECTION = "partial-injection"
    PROJECTION = "diagonal-projection"


@dataclass(frozen=True)
class BasisOperator:
    """
    A partial injection sending basis points to basis points, as a union of cells.

    Cells of one operator have disjoint regions and disjoint images. Projections
    are the special case where every cell is an identity map.
    """
    kind: OperatorKind
    cells: Tuple[Cell, ...] = ()
    label: str = ""

    @classmethod
    def injection(cls, cells: Iterable[Cell], label: str = "") -> "BasisOperator":
        return cls(OperatorKind.PARTIAL_INJECTION, tuple(c for c in cells if not c.is_empty), label)

    @classmethod
    def projection(cls, cells: Iterable[Cell], label: str = "") -> "BasisOperator":
        return cls(OperatorKind.PROJECTION, tuple(c.support() for c in cells if not c.is_empty), label)

    @classmethod
    def zero(cls, label: str = "") -> "BasisOperator":
        return cls(OperatorKind.PROJECTION, (), label)

    @property
    def is_zero(self) -> bool:
        return not self.cells

    @property
    def max_scale(self) -> int:
        return max((c.scale for c in self.cells), default=1)

    @property
    def threshold(self) -> int:
        return max((c.threshold for c in self.cells), default=0)

    @property
    def max_offset(self) -> int:
        return max((abs(c.offset) for c in self.cells), default=0)

    @property
    def tags(self) -> Tuple[Optional[str], ...]:
        """Tags the operator reads from or writes to, in first-seen order."""
        return tuple(dict.fromkeys(t for c in self.cells for t in (c.source, c.target)))

    def cell_of(self, point: BasisPoint) -> Optional[Cell]:
        for cell in self.cells:
            if cell.contains(point):
                return cell
        return None

    def contains(self, point: BasisPoint) -> bool:
        """Membership in the support (initial space)."""
        return self.cell_of(point) is not None

    def in_range(self, point: BasisPoint) -> bool:
        return self.preimage(point) is not None

    def apply(self, point: BasisPoint) -> Optional[BasisPoint]:
        cell = self.cell_of(point)
        return None if cell is None else cell.map(point)

    def preimage(self, point: BasisPoint) -> Optional[BasisPoint]:
        for cell in self.cells:
            found = cell.inverse(point)
            if found is not None:
                return found
        return None

    def compose(self, first: "BasisOperator") -> "BasisOperator":
        """self ∘ first: apply `first`, then `self`."""
        cells = []
        for inner in first.cells:
            for outer in self.cells:
                joined = inner.then(outer)
                if joined is not None:
                    cells.append(joined)
        kind = (
            OperatorKind.PROJECTION
            if self.kind == OperatorKind.PROJECTION and first.kind == OperatorKind.PROJECTION
            else OperatorKind.PARTIAL_INJECTION
        )
        label = f"{self.label}·{first.label}" if self.label and first.label else ""
        return BasisOperator(kind, tuple(cells), label)

    def support(self) -> "BasisOperator":
        return BasisOperator.projection(self.cells, f"{self.label}*{self.label}" if self.label else "")

    def range_projection(self) -> "BasisOperator":
        return BasisOperator.projection(
            (c.image() for c in self.cells), f"{self.label}{self.label}*" if self.label else ""
        )

    def relabel(self, label: str) -> "BasisOperator":
        return replace(self, label=label)


@dataclass(frozen=True)
class HalfSpace:
    """P = (F + 1)/2 for the sign operator: the points with active coordinate >= 0."""

    def contains(self, point: BasisPoint) -> bool:
        return point.active >= 0


@dataclass(frozen=True)
class ResidueClass:
    """Points whose coordinate sum is congruent to `residue` modulo `modulus`."""
    modulus: int
    residue: int

    def contains(self, point: BasisPoint) -> bool:
        return (sum(point.coords) - self.residue) % self.modulus == 0


@dataclass(frozen=True)
class SignOperator:
    """
    F|b> = sign(b)|b> with sign(b) = +1 iff the active coordinate is >= 0.

    `trivial` makes F the identity. `redirects` overrides F on finitely many points
    (F|b> = |redirects[b]>) and exists only to build broken fixtures.
    """
    trivial: bool = False
    redirects: Mapping[BasisPoint, BasisPoint] = field(default_factory=dict)

    @property
    def is_diagonal(self) -> bool:
        return not self.redirects

    @property
    def is_involution(self) -> bool:
        return all(self.redirects.get(target) == source for source, target in self.redirects.items())

    def sign(self, point: BasisPoint) -> int:
        if self.trivial:
            return 1
        return 1 if point.active >= 0 else -1

    def apply(self, point: BasisPoint) -> Dict[BasisPoint, int]:
        if point in self.redirects:
            return {self.redirects[point]: 1}
        return {point: self.sign(point)}

    def half_space(self) -> Optional[HalfSpace]:
        """The range of P = (F + 1)/2, None when P is the identity."""
        return None if self.trivial else HalfSpace()

    @property
    def bound(self) -> int:
        return max((abs(b.active) for pair in self.redirects.items() for b in pair), default=0)


def combine(*vectors: Mapping[BasisPoint, int], signs: Optional[List[int]] = None) -> Dict[BasisPoint, int]:
    """Sparse linear combination of basis-point vectors, zeros dropped."""
    signs = signs or [1] * len(vectors)
    total: Dict[BasisPoint, int] = {}
    for sign, vector in zip(signs, vectors):
        for point, value in vector.items():
            total[point] = total.get(point, 0) + sign * value
    return {point: value for point, value in total.items() if value}
