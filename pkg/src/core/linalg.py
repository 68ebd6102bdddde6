"""
Exact integer linear algebra: Smith normal form with transform tracking, kernels,
cokernel presentations and element orders.
"""
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix

from models.groups import (
    AbelianGroupPresentation,
    IntVector,
    SmithDecomposition,
    as_matrix,
    identity,
)
from utils.exceptions import DimensionMismatchError
from utils.logger import logger


class _SmithState:
    """Working copy of D, U, V and their inverses; every move keeps D = U·A·V."""

    def __init__(self, A: np.ndarray):
        rows, cols = A.shape
        self.D = A.copy()
        self.U, self.U_inv = identity(rows), identity(rows)
        self.V, self.V_inv = identity(cols), identity(cols)

    # Row moves act on U from the left and on U_inv from the right.
    def add_row(self, target: int, source: int, q: int) -> None:
        if q == 0:
            return
        self.D[target] += q * self.D[source]
        self.U[target] += q * self.U[source]
        self.U_inv[:, source] -= q * self.U_inv[:, target]

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.D[[i, j]] = self.D[[j, i]]
        self.U[[i, j]] = self.U[[j, i]]
        self.U_inv[:, [i, j]] = self.U_inv[:, [j, i]]

    def negate_row(self, i: int) -> None:
        self.D[i] = -self.D[i]
        self.U[i] = -self.U[i]
        self.U_inv[:, i] = -self.U_inv[:, i]

    # Column moves act on V from the right and on V_inv from the left.
    def add_col(self, target: int, source: int, q: int) -> None:
        if q == 0:
            return
        self.D[:, target] += q * self.D[:, source]
        self.V[:, target] += q * self.V[:, source]
        self.V_inv[source] -= q * self.V_inv[target]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        self.D[:, [i, j]] = self.D[:, [j, i]]
        self.V[:, [i, j]] = self.V[:, [j, i]]
        self.V_inv[[i, j]] = self.V_inv[[j, i]]

    def smallest_entry(self, t: int) -> Optional[Tuple[int, int]]:
        """Position of the smallest nonzero |entry| in the trailing block, row-major ties."""
        best = None
        rows, cols = self.D.shape
        for r in range(t, rows):
            for c in range(t, cols):
                value = abs(int(self.D[r, c]))
                if value and (best is None or value < best[0]):
                    best = (value, r, c)
        return None if best is None else (best[1], best[2])

    def clear_cross(self, t: int) -> None:
        """Zero row t and column t outside the pivot, shrinking the pivot when needed."""
        rows, cols = self.D.shape
        while True:
            pivot = int(self.D[t, t])
            for r in range(t + 1, rows):
                self.add_row(r, t, -(int(self.D[r, t]) // pivot))
            for c in range(t + 1, cols):
                self.add_col(c, t, -(int(self.D[t, c]) // pivot))

            remainder = None
            for r in range(t + 1, rows):
                value = abs(int(self.D[r, t]))
                if value and (remainder is None or value < remainder[0]):
                    remainder = (value, r, None)
            for c in range(t + 1, cols):
                value = abs(int(self.D[t, c]))
                if value and (remainder is None or value < remainder[0]):
                    remainder = (value, None, c)
            if remainder is None:
                return
            _, r, c = remainder
            if r is not None:
                self.swap_rows(t, r)
            else:
                self.swap_cols(t, c)

    def divisibility_offender(self, t: int) -> Optional[int]:
        """A row below t holding an entry not divisible by the pivot."""
        rows, cols = self.D.shape
        pivot = int(self.D[t, t])
        for r in range(t + 1, rows):
            for c in range(t + 1, cols):
                if int(self.D[r, c]) % pivot:
                    return r
        return None


def smith(A) -> SmithDecomposition:
    """
    Smith normal form with unimodular transforms.

    Pivoting is deterministic (smallest nonzero |entry|, row-major tie-break), so
    equal inputs give equal decompositions.
    """
    A = as_matrix(A)
    rows, cols = A.shape
    state = _SmithState(A)

    for t in range(min(rows, cols)):
        position = state.smallest_entry(t)
        if position is None:
            break
        state.swap_rows(t, position[0])
        state.swap_cols(t, position[1])

        while True:
            state.clear_cross(t)
            offender = state.divisibility_offender(t)
            if offender is None:
                break
            state.add_row(t, offender, 1)

        if int(state.D[t, t]) < 0:
            state.negate_row(t)

    logger.debug(f"smith: {rows}x{cols}, diagonal {[int(state.D[i, i]) for i in range(min(rows, cols))]}")
    return SmithDecomposition(state.U, state.D, state.V, state.U_inv, state.V_inv, rows, cols)


def _column(matrix: np.ndarray, j: int) -> IntVector:
    return tuple(int(x) for x in matrix[:, j])


def _row(matrix: np.ndarray, i: int) -> IntVector:
    return tuple(int(x) for x in matrix[i])


def kernel_basis(A) -> List[IntVector]:
    """Z-basis of {x : A·x = 0}; empty for injective A."""
    decomposition = smith(A)
    return [_column(decomposition.V, j) for j in range(decomposition.rank, decomposition.cols)]


def cokernel(A, basis: Sequence[str]) -> AbelianGroupPresentation:
    """
    Presentation of Z^rows / im A, with generators in the named ambient basis.

    Unit diagonal entries are dropped; torsion generators come first, then free ones.
    """
    A = as_matrix(A, rows=len(basis))
    if A.shape[0] != len(basis):
        raise DimensionMismatchError(
            f"matrix has {A.shape[0]} rows but the basis has {len(basis)} names"
        )
    decomposition = smith(A)
    diagonal = decomposition.diagonal
    rank = decomposition.rank

    torsion_indices = [i for i in range(rank) if diagonal[i] != 1]
    free_indices = list(range(rank, decomposition.rows))
    kept = torsion_indices + free_indices

    return AbelianGroupPresentation(
        torsion=tuple(diagonal[i] for i in torsion_indices),
        free_rank=len(free_indices),
        basis=tuple(basis),
        generators=tuple(_column(decomposition.U_inv, i) for i in kept),
        coordinate_rows=tuple(_row(decomposition.U, i) for i in kept),
    )


def kernel(A, basis: Sequence[str]) -> AbelianGroupPresentation:
    """Presentation of ker A (free), named in the basis indexing the columns of A."""
    A = as_matrix(A, cols=len(basis))
    if A.shape[1] != len(basis):
        raise DimensionMismatchError(
            f"matrix has {A.shape[1]} columns but the basis has {len(basis)} names"
        )
    decomposition = smith(A)
    rank = decomposition.rank
    free_indices = range(rank, decomposition.cols)

    return AbelianGroupPresentation(
        torsion=(),
        free_rank=len(free_indices),
        basis=tuple(basis),
        generators=tuple(_column(decomposition.V, j) for j in free_indices),
        coordinate_rows=tuple(_row(decomposition.V_inv, j) for j in free_indices),
        constraint_rows=tuple(_row(decomposition.V_inv, j) for j in range(rank)),
    )


def element_order(group: AbelianGroupPresentation, vector: Sequence[int]) -> Optional[int]:
    """Least k >= 1 with k·x trivial in the group, or None when x has infinite order."""
    coords = group.reduce(vector)
    order = 1
    for value, modulus in zip(coords, group.moduli):
        if modulus == 0:
            if value != 0:
                return None
        else:
            order = lcm(order, modulus // gcd(modulus, value))
    return order


def generates(group: AbelianGroupPresentation, vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the classes of `vectors` span the whole group."""
    size = len(group.moduli)
    if size == 0:
        return True
    columns = [group.reduce(v) for v in vectors]
    for i, modulus in enumerate(group.moduli):
        if modulus:
            columns.append(tuple(modulus if j == i else 0 for j in range(size)))
    if not columns:
        return False
    matrix = as_matrix([[column[i] for column in columns] for i in range(size)])
    diagonal = smith(matrix).diagonal
    return sum(1 for d in diagonal if d == 1) == size


def determinant(A) -> int:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatchError(f"determinant of a non-square {A.shape} matrix")
    if A.shape[0] == 0:
        return 1
    return int(Matrix(A.tolist()).det())
