"""
Exact integer matrices, Smith decompositions and presented abelian groups.

Matrices are numpy object arrays holding Python ints, so entries never overflow.
"""
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from utils.exceptions import DimensionMismatchError, NotInGroupError

IntVector = Tuple[int, ...]


def as_matrix(data, rows: int = None, cols: int = None) -> np.ndarray:
    """
    Coerce nested sequences (or an array) to an exact integer matrix.

    `rows`/`cols` are needed only to give empty matrices their shape.
    """
    if isinstance(data, np.ndarray) and data.ndim == 2:
        matrix = np.empty(data.shape, dtype=object)
        for index, value in np.ndenumerate(data):
            matrix[index] = int(value)
        return matrix

    data = [list(row) for row in data]
    if not data:
        return np.zeros((rows or 0, cols or 0), dtype=object)
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise DimensionMismatchError("ragged matrix rows")
    matrix = np.zeros((len(data), width if width else (cols or 0)), dtype=object)
    for i, row in enumerate(data):
        for j, value in enumerate(row):
            matrix[i, j] = int(value)
    return matrix


def identity(size: int) -> np.ndarray:
    matrix = np.zeros((size, size), dtype=object)
    for i in range(size):
        matrix[i, i] = 1
    return matrix


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product that also handles empty inner dimensions."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatchError(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=object)
    return np.dot(a, b)


def apply(matrix: np.ndarray, vector: Sequence[int]) -> IntVector:
    if matrix.shape[1] != len(vector):
        raise DimensionMismatchError(
            f"vector of length {len(vector)} does not fit a {matrix.shape[0]}x{matrix.shape[1]} matrix"
        )
    return tuple(
        sum((int(matrix[i, j]) * int(vector[j]) for j in range(matrix.shape[1])), 0)
        for i in range(matrix.shape[0])
    )


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(int(x) == int(y) for x, y in zip(a.flat, b.flat))


@dataclass(frozen=True)
class SmithDecomposition:
    """
    U·A·V = D with U, V unimodular and D diagonal in divisibility-chain form.

    The inverses of U and V are tracked alongside so that generator expressions
    never need a rational inverse.
    """
    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    U_inv: np.ndarray
    V_inv: np.ndarray
    rows: int
    cols: int

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(int(self.D[i, i]) for i in range(min(self.rows, self.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class AbelianGroupPresentation:
    """
    A group Z/d_1 + ... + Z/d_k + Z^f whose generators are vectors in a named ambient basis.

    `coordinate_rows[i]` is a linear form on the ambient lattice giving the i-th
    coordinate (reduced mod `moduli[i]`). `constraint_rows` are forms that must
    vanish on members of the group; they are empty for quotients.
    """
    torsion: Tuple[int, ...]
    free_rank: int
    basis: Tuple[str, ...]
    generators: Tuple[IntVector, ...]
    coordinate_rows: Tuple[IntVector, ...]
    constraint_rows: Tuple[IntVector, ...] = ()

    @property
    def moduli(self) -> Tuple[int, ...]:
        return self.torsion + (0,) * self.free_rank

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self):
        """Group order, or None when infinite."""
        if not self.is_finite:
            return None
        total = 1
        for d in self.torsion:
            total *= d
        return total

    def _dot(self, row: IntVector, vector: Sequence[int]) -> int:
        return sum(int(a) * int(b) for a, b in zip(row, vector))

    def reduce(self, vector: Sequence[int]) -> IntVector:
        """Coordinates of an ambient vector in Z/d_1 + ... + Z^f."""
        if len(vector) != len(self.basis):
            raise DimensionMismatchError(
                f"vector of length {len(vector)} in a basis of size {len(self.basis)}"
            )
        for row in self.constraint_rows:
            if self._dot(row, vector) != 0:
                raise NotInGroupError(f"{tuple(vector)} is not in the group")
        coords: List[int] = []
        for row, modulus in zip(self.coordinate_rows, self.moduli):
            value = self._dot(row, vector)
            coords.append(value % modulus if modulus else value)
        return tuple(coords)

    def to_dict(self) -> Dict[str, object]:
        return {
            "torsion": list(self.torsion),
            "free_rank": self.free_rank,
            "basis": list(self.basis),
            "generators": [
                {"order": d if d else None, "vector": list(g)}
                for d, g in zip(self.moduli, self.generators)
            ],
        }
