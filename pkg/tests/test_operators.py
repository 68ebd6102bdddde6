"""
Tests for basis points, affine cells and basis operators.
"""
import random

import pytest

from models.operators import (
    BasisOperator,
    BasisPoint,
    Cell,
    HalfSpace,
    OperatorKind,
    ResidueClass,
    SignOperator,
    combine,
)


def point(n, tag="a", leading=()):
    return BasisPoint(tag, tuple(leading) + (n,))


def test_basis_point_rejects_negative_leading():
    with pytest.raises(ValueError):
        BasisPoint(None, (-1, 0))
    with pytest.raises(ValueError):
        BasisPoint(None, ())
    assert BasisPoint(None, (2, -5)).active == -5
    assert BasisPoint(None, (2, -5)).leading == (2,)


def test_cell_map_and_inverse():
    cell = Cell("a", "b", lower=0, scale=2, offset=1)
    assert cell.map(point(3)) == point(7, "b")
    assert cell.inverse(point(7, "b")) == point(3)
    assert cell.inverse(point(6, "b")) is None
    assert cell.inverse(point(-1, "b")) is None
    assert not cell.contains(point(-1))


def test_cell_image_is_the_range():
    image = Cell("a", "b", lower=0, scale=2, offset=1).image()
    assert image.contains(point(1, "b"))
    assert image.contains(point(5, "b"))
    assert not image.contains(point(2, "b"))
    assert not image.contains(point(-1, "b"))


def test_cell_validation():
    with pytest.raises(ValueError):
        Cell("a", "a", scale=0)
    with pytest.raises(ValueError):
        Cell("a", "a", pattern=((0, None),), shift=(1, 1))


def test_empty_cells():
    assert Cell("a", "a", lower=3, upper=2).is_empty
    assert Cell("a", "a", lower=1, upper=1, modulus=2, residue=0).is_empty
    assert not Cell("a", "a", lower=1, upper=2, modulus=2, residue=0).is_empty


def test_then_solves_the_congruence():
    doubling = Cell("a", "a", scale=2)
    twos_mod_four = Cell("a", "a", modulus=4, residue=2)
    joined = doubling.then(twos_mod_four)
    assert (joined.modulus, joined.residue, joined.scale) == (2, 1, 2)


def test_then_on_unreachable_residue():
    doubling = Cell("a", "a", scale=2)
    odd = Cell("a", "a", modulus=2, residue=1)
    assert doubling.then(odd) is None


def test_then_with_leading_shifts():
    raise_first = Cell(None, None, pattern=((0, None),), shift=(1,))
    pinned = Cell(None, None, pattern=((2, 2),))
    joined = raise_first.then(pinned)
    assert joined.pattern == ((1, 1),)
    assert joined.map(BasisPoint(None, (1, 4))) == BasisPoint(None, (2, 4))


def _random_cell(rng, source, target):
    lower = rng.choice([None, rng.randint(-6, 6)])
    upper = rng.choice([None, rng.randint(-6, 12)])
    return Cell(
        source,
        target,
        lower=lower,
        upper=upper,
        modulus=rng.randint(1, 3),
        residue=rng.randint(0, 2),
        scale=rng.randint(1, 3),
        offset=rng.randint(-5, 5),
    )


def test_compose_agrees_with_pointwise_application():
    rng = random.Random(7)
    for _ in range(300):
        first = BasisOperator.injection([_random_cell(rng, "a", "b")])
        second = BasisOperator.injection([_random_cell(rng, "b", "c")])
        composite = second.compose(first)
        for n in range(-30, 31):
            middle = first.apply(point(n))
            expected = None if middle is None else second.apply(middle)
            assert composite.apply(point(n)) == expected


def test_projection_and_composition_kinds():
    half_line = BasisOperator.projection([Cell("a", "a", lower=0)], "p")
    shift = BasisOperator.injection([Cell("a", "a", offset=1)], "s")
    assert half_line.compose(half_line).kind == OperatorKind.PROJECTION
    assert shift.compose(half_line).kind == OperatorKind.PARTIAL_INJECTION
    assert shift.compose(half_line).label == "s·p"


def test_support_and_range_projection():
    T = BasisOperator.injection([Cell("a", "b", lower=0, scale=2, offset=1)], "e")
    assert T.support().contains(point(0))
    assert not T.support().contains(point(-1))
    assert T.range_projection().contains(point(5, "b"))
    assert not T.range_projection().contains(point(4, "b"))
    assert T.range_projection().label == "ee*"
    assert T.preimage(point(5, "b")) == point(2)
    assert T.in_range(point(1, "b"))


def test_operator_summaries():
    T = BasisOperator.injection(
        [Cell("a", "b", lower=-3, scale=2, offset=4), Cell("c", "b", upper=7, offset=-9)]
    )
    assert T.threshold == 7
    assert T.max_offset == 9
    assert T.max_scale == 2
    assert T.tags == ("a", "b", "c")
    assert BasisOperator.zero().is_zero


def test_spaces():
    assert HalfSpace().contains(point(0))
    assert not HalfSpace().contains(point(-1))
    space = ResidueClass(3, 1)
    assert space.contains(BasisPoint(None, (2, 2)))
    assert not space.contains(BasisPoint(None, (2, 3)))


def test_sign_operator():
    F = SignOperator()
    assert F.sign(point(0)) == 1
    assert F.sign(point(-1)) == -1
    assert SignOperator(trivial=True).sign(point(-1)) == 1
    assert SignOperator(trivial=True).half_space() is None

    broken = SignOperator(redirects={point(0): point(4)})
    assert not broken.is_diagonal
    assert not broken.is_involution
    assert broken.apply(point(0)) == {point(4): 1}
    assert broken.apply(point(-2)) == {point(-2): -1}
    assert broken.bound == 4


def test_combine_drops_zeros():
    a, b = point(0), point(1)
    assert combine({a: 1, b: 2}, {a: 1}, signs=[1, -1]) == {b: 2}
