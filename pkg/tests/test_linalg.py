"""
Tests for the Smith normal form and group presentations.
"""
import pytest
from sympy import Matrix

from core.linalg import (
    cokernel,
    determinant,
    element_order,
    generates,
    kernel,
    kernel_basis,
    smith,
)
from models.groups import apply, as_matrix, equal, identity, matmul
from services.corpus import random_matrix
from utils.exceptions import DimensionMismatchError, NotInGroupError


def assert_smith_sound(A):
    s = smith(A)
    rows, cols = A.shape
    assert equal(matmul(matmul(s.U, A), s.V), s.D)
    assert equal(matmul(s.U, s.U_inv), identity(rows))
    assert equal(matmul(s.V, s.V_inv), identity(cols))
    for i in range(rows):
        for j in range(cols):
            if i != j:
                assert s.D[i, j] == 0
    diagonal = s.diagonal
    assert all(d >= 0 for d in diagonal)
    for a, b in zip(diagonal, diagonal[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
    return s


def test_smith_small_example():
    s = assert_smith_sound(as_matrix([[2, 4], [6, 8]]))
    assert s.diagonal == (2, 4)
    assert s.rank == 2


def test_smith_fixes_divisibility():
    # diag(2, 3) is not in chain form; Z/2 + Z/3 = Z/6
    s = assert_smith_sound(as_matrix([[2, 0], [0, 3]]))
    assert s.diagonal == (1, 6)


def test_smith_random_corpus(rng):
    for _ in range(150):
        A = random_matrix(rng, 7, 9)
        s = assert_smith_sound(A)
        if A.size:
            assert s.rank == Matrix(A.tolist()).rank()


def test_smith_is_deterministic(rng):
    A = random_matrix(rng, 6, 9)
    assert smith(A).diagonal == smith(A.copy()).diagonal
    assert equal(smith(A).U, smith(A.copy()).U)


def test_smith_empty_shapes():
    for shape in ((0, 0), (0, 3), (3, 0)):
        A = as_matrix([], rows=shape[0], cols=shape[1])
        s = assert_smith_sound(A)
        assert s.rank == 0


def test_cokernel_of_g2_boundary():
    group = cokernel([[0, 0], [1, 0]], ("v1", "v2"))
    assert group.torsion == ()
    assert group.free_rank == 1
    assert group.reduce([0, 1]) == (0,)
    assert abs(group.reduce([1, 0])[0]) == 1


def test_cokernel_torsion_and_orders():
    group = cokernel([[0], [2]], ("u", "w"))
    assert group.torsion == (2,)
    assert group.free_rank == 1
    assert element_order(group, [0, 1]) == 2
    assert element_order(group, [0, 2]) == 1
    assert element_order(group, [1, 0]) is None
    assert group.order is None


def test_cokernel_drops_unit_factors():
    group = cokernel([[1, 0], [0, 1]], ("a", "b"))
    assert group.is_trivial
    assert group.order == 1


def test_cokernel_generators_reduce_to_unit_coordinates(rng):
    for _ in range(40):
        A = random_matrix(rng, 5, 6)
        basis = tuple(f"b{i}" for i in range(A.shape[0]))
        group = cokernel(A, basis)
        for i, generator in enumerate(group.generators):
            expected = tuple(1 if j == i else 0 for j in range(len(group.moduli)))
            assert group.reduce(generator) == expected
        for j in range(A.shape[1]):
            column = [int(x) for x in A[:, j]]
            assert all(c == 0 for c in group.reduce(column))


def test_kernel_membership():
    group = kernel([[0, 0], [1, 0]], ("v1", "v2"))
    assert group.free_rank == 1
    assert group.torsion == ()
    assert abs(group.reduce([0, 1])[0]) == 1
    with pytest.raises(NotInGroupError):
        group.reduce([1, 0])


def test_kernel_basis_is_annihilated(rng):
    for _ in range(40):
        A = random_matrix(rng, 5, 6)
        for vector in kernel_basis(A):
            assert all(x == 0 for x in apply(A, vector))
        if A.size:
            assert len(kernel_basis(A)) == A.shape[1] - Matrix(A.tolist()).rank()


def test_dimension_checks():
    with pytest.raises(DimensionMismatchError):
        cokernel([[1, 2]], ("a", "b"))
    with pytest.raises(DimensionMismatchError):
        kernel([[1, 2]], ("a",))
    group = cokernel([[0], [2]], ("u", "w"))
    with pytest.raises(DimensionMismatchError):
        group.reduce([1])


def test_generates():
    group = cokernel([[0], [2]], ("u", "w"))
    assert generates(group, [[1, 0], [0, 1]])
    assert not generates(group, [[1, 0]])
    assert not generates(group, [[1, 0], [0, 2]])
    assert generates(cokernel([[1]], ("a",)), [])


def test_generates_cyclic_torsion():
    # Z/6 is generated by 5 but not by 2
    group = cokernel([[6]], ("a",))
    assert generates(group, [[5]])
    assert not generates(group, [[2]])
    assert generates(group, [[2], [3]])


def test_determinant():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant(as_matrix([], rows=0, cols=0)) == 1
    with pytest.raises(DimensionMismatchError):
        determinant([[1, 2]])


def test_to_dict_marks_infinite_generators():
    group = cokernel([[0], [2]], ("u", "w"))
    payload = group.to_dict()
    assert payload["torsion"] == [2]
    assert payload["free_rank"] == 1
    assert [g["order"] for g in payload["generators"]] == [2, None]
