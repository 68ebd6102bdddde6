"""
Tests for defect certificates, exact ranks and compressed indices, each checked
against the window oracles.
"""
import pytest

import core.defects as defects
from core.defects import (
    certificate_radius,
    certify_commutator,
    commutator_rank,
    compressed_index,
    compression_defects,
    perturbation_rank,
    sparse_rank,
    window_basis,
    window_commutator_rank,
    window_difference_rank,
    window_index,
)
from models.operators import BasisOperator, BasisPoint, Cell, HalfSpace, ResidueClass, SignOperator
from utils.exceptions import CertificateViolation

F = SignOperator()


def shift(k, tag="v"):
    """|n> -> |n + k> on the whole line."""
    return BasisOperator.injection([Cell(tag, tag, offset=k)], f"s{k}")


def test_certificate_radius():
    T = BasisOperator.injection([Cell("a", "a", lower=0, scale=2, offset=1)])
    assert certificate_radius(T) == 2
    T = BasisOperator.injection([Cell("a", "a", lower=-4, scale=3, offset=-2)])
    assert certificate_radius(T) == 3 * 4 + 4 + 2 + 1
    assert certificate_radius(T, sign=SignOperator(redirects={BasisPoint("a", (9,)): BasisPoint("a", (0,))})) == 28


@pytest.mark.parametrize("k", [-3, -1, 0, 1, 4])
def test_shift_commutator(k):
    T = shift(k)
    certificate = certify_commutator(F, T)
    assert certificate.count == abs(k)
    assert commutator_rank(F, T) == abs(k)
    window = window_basis(("v",), 3 * certificate.radius)
    assert window_commutator_rank(F, T, window) == abs(k)
    assert certificate.shell_points > 0


@pytest.mark.parametrize("k", [-3, -1, 0, 2, 5])
def test_shift_index(k):
    T = shift(k)
    index = compressed_index(HalfSpace(), T, T.support(), T.range_projection())
    assert index == -k
    radius = certificate_radius(T)
    for factor in (1, 2, 3):
        window = window_basis(("v",), factor * radius)
        assert window_index(HalfSpace(), T, T.support(), T.range_projection(), window) == -k


def test_identity_has_no_defects():
    identity = BasisOperator.projection([Cell("v", "v")])
    assert commutator_rank(F, identity) == 0
    assert compressed_index(HalfSpace(), identity, identity, identity) == 0


def test_half_line_inclusion_index():
    dom = BasisOperator.projection([Cell("v", "v", lower=0)])
    cod = BasisOperator.projection([Cell("v", "v", lower=1)])
    kernel, cokernel = compression_defects(None, dom, dom, cod)
    assert kernel.defects == (BasisPoint("v", (0,)),)
    assert cokernel.count == 0
    assert compressed_index(None, dom, dom, cod) == 1


def test_scaled_index():
    # |n, w> -> |2(n - 3), v>: index 3 on the half space
    T = BasisOperator.injection([Cell("w", "v", scale=2, offset=-6)])
    assert compressed_index(HalfSpace(), T, T.support(), T.range_projection()) == 3


def test_unbounded_defect_set_is_rejected():
    # lowering the active coordinate on every leading slice flips signs infinitely often
    T = BasisOperator.injection([Cell(None, None, pattern=((0, None),), offset=-1)])
    with pytest.raises(CertificateViolation):
        certify_commutator(F, T)


def test_unbounded_cell_without_defects_passes():
    T = BasisOperator.injection([Cell(None, None, pattern=((0, None),), shift=(1,))])
    assert commutator_rank(F, T) == 0


def test_unbounded_cell_is_scanned_along_every_free_coordinate():
    cell = Cell(None, None, pattern=((0, None), (0, None)))
    assert set(defects._sample_leadings(cell, 1)) == {(0, 0), (1, 0), (0, 1)}
    pinned_second = Cell(None, None, pattern=((2, None), (3, 3)))
    assert set(defects._sample_leadings(pinned_second, 2)) == {(2, 3), (3, 3), (4, 3)}

    # a defect that only appears once the second leading coordinate leaves the anchor
    def is_defect(point):
        return point.leading[1] == 1 and point.active == 0

    with pytest.raises(CertificateViolation):
        defects._scan([cell], is_defect, radius=2, guard=2, what="T")



def test_guard_shell_tripwire(monkeypatch):
    monkeypatch.setattr(defects, "certificate_radius", lambda *args, **kwargs: 0)
    with pytest.raises(CertificateViolation):
        certify_commutator(F, shift(-5))


def test_residue_restriction():
    # only even points count
    T = shift(-4)
    assert commutator_rank(F, T, ResidueClass(2, 0)) == 2
    assert commutator_rank(F, T, ResidueClass(2, 1)) == 2
    assert commutator_rank(F, shift(-3), ResidueClass(3, 0)) == 1


def test_perturbation_rank():
    T0 = BasisOperator.projection([Cell("v", "v", lower=0)])
    T1 = BasisOperator.projection([Cell("v", "v", lower=-2)])
    assert perturbation_rank(T0, T1) == 2
    window = window_basis(("v",), 3 * certificate_radius(T0, T1))
    assert window_difference_rank(T0, T1, window) == 2
    assert perturbation_rank(T0, T0) == 0


def test_perturbation_rank_of_moved_point():
    # agree except that |0> goes to |10> instead of |0>
    T0 = BasisOperator.injection([Cell("v", "v", lower=0)])
    T1 = BasisOperator.injection([
        Cell("v", "v", lower=0, upper=0, offset=10),
        Cell("v", "v", lower=1),
    ])
    assert perturbation_rank(T0, T1) == 1


def test_sparse_rank():
    a, b = BasisPoint("v", (0,)), BasisPoint("v", (1,))
    assert sparse_rank([{a: 1, b: 1}, {a: 2, b: 2}]) == 1
    assert sparse_rank([{a: 1}, {b: 3}, {}]) == 2
    assert sparse_rank([]) == 0


def test_redirected_sign_rank():
    b0, b1 = BasisPoint("v", (2,)), BasisPoint("v", (5,))
    broken = SignOperator(redirects={b0: b1})
    point_projection = BasisOperator.projection([Cell("v", "v", lower=2, upper=2)])
    assert commutator_rank(broken, point_projection) == 1
    window = window_basis(("v",), 20)
    assert window_commutator_rank(broken, point_projection, window) == 1
