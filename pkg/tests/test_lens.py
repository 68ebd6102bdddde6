"""
Tests for the quantum sphere and lens space computations.
"""
import math
from itertools import product

import pytest

from core.defects import window_basis
from core.fredholm import check_relations, check_star_condition, index_k0, index_k1
from core.graphs import lens_graph, sphere_graph
from core.lens import (
    D_operator,
    alternative_coboundary,
    determinant_checks,
    eigenspace_module,
    eigenspaces_partition,
    hl_even_character,
    hl_module,
    lens_coboundary,
    lens_k0_generator,
    lens_k1_generators,
    lens_k_homology,
    path_count_index,
    projective_coboundary,
    restricted_block,
    t_operator,
    unit_vector,
)
from core.linalg import cokernel, determinant, element_order
from models.groups import as_matrix, equal
from services.lens_service import lens_report


def test_t_is_nilpotent():
    t = t_operator(4)
    assert not equal(t.power(3).matrix, as_matrix([[0] * 4] * 4))
    assert equal(t.power(4).matrix, as_matrix([[0] * 4] * 4))


def test_D_for_n_2():
    assert equal(D_operator(2).matrix, as_matrix([[1, 1], [0, 1]]))


@pytest.mark.parametrize("n, p", [(2, 1), (2, 4), (3, 2), (3, 3), (4, 2)])
def test_D_power_is_path_adjacency(n, p):
    assert equal(D_operator(n).power(p).matrix, lens_graph(n, p).adjacency_matrix())


@pytest.mark.parametrize("p", range(1, 8))
def test_lens_coboundary_n_2(p):
    assert equal(lens_coboundary(2, p), as_matrix([[0, p], [0, 0]]))


def test_lens_coboundary_rejects_bad_parameters():
    with pytest.raises(ValueError):
        lens_coboundary(1, 3)
    with pytest.raises(ValueError):
        lens_coboundary(3, 0)


@pytest.mark.parametrize("p", range(2, 8))
def test_k1_for_n_2(p):
    k0, k1 = lens_k_homology(2, p)
    assert (k1.torsion, k1.free_rank) == ((p,), 1)
    assert (k0.torsion, k0.free_rank) == ((), 1)


@pytest.mark.parametrize("n", range(2, 7))
def test_k1_for_p_2(n):
    _, k1 = lens_k_homology(n, 2)
    assert (k1.torsion, k1.free_rank) == ((2 ** (n - 1),), 1)


def test_sphere_k1_is_free():
    _, k1 = lens_k_homology(3, 1)
    assert (k1.torsion, k1.free_rank) == ((), 1)


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("p", range(2, 8))
def test_determinants(n, p):
    assert all(determinant_checks(n, p).values())


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("p", range(2, 8))
def test_torsion_order_is_block_determinant(n, p):
    _, k1 = lens_k_homology(n, p)
    assert math.prod(k1.torsion) == abs(determinant(restricted_block(n, p))) == p ** (n - 1)
    assert determinant_checks(n, p)["torsion_order"]



@pytest.mark.parametrize("n", range(2, 6))
def test_projective_formula(n):
    assert equal(projective_coboundary(n), lens_coboundary(n, 2))


@pytest.mark.parametrize("n, p", [(2, 3), (3, 2), (3, 4), (4, 3)])
def test_alternative_coboundary_same_cokernel(n, p):
    _, k1 = lens_k_homology(n, p)
    other = cokernel(alternative_coboundary(n, p), k1.basis)
    assert (other.torsion, other.free_rank) == (k1.torsion, k1.free_rank)


def test_path_count_index():
    for m in range(5):
        assert path_count_index(2, m) == (-m, -1)
    assert path_count_index(3, 2) == (-3, -2, -1)


# Sphere module

@pytest.mark.parametrize("n", [2, 3, 4])
def test_sphere_module_satisfies_star(n):
    hl = hl_module(n)
    assert check_star_condition(hl.module, hl.module.graph).passed


def test_sphere_module_index_is_minus_eta_n():
    hl = hl_module(3)
    graph = hl.module.graph
    result = index_k1(hl.module, graph)
    assert result.vertex_index.to_dict() == {"v1": 0, "v2": 0, "v3": -1}


def test_path_module_relations():
    hl = hl_module(3)
    assert check_relations(eigenspace_module(hl, 2, None), lens_graph(3, 2)).passed


def test_eigenspace_residue_is_validated():
    hl = hl_module(2)
    with pytest.raises(ValueError):
        eigenspace_module(hl, 3, 3)
    with pytest.raises(ValueError):
        eigenspace_module(hl, 0, None)


def test_eigenspaces_partition_the_basis():
    points = window_basis((None,), 4, 2, 3)
    assert eigenspaces_partition(3, points)
    assert eigenspaces_partition(1, points)


@pytest.mark.parametrize("n, p", [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3), (4, 2)])
def test_eigenspace_indices_match_path_counts(n, p):
    generators = lens_k1_generators(n, p)
    assert [row.index_vector for row in generators.rows] == [path_count_index(n, m) for m in range(p)]
    assert generators.eigenspace_sum
    assert generators.generates


@pytest.mark.parametrize("p", range(2, 8))
def test_generator_orders_n_2(p):
    rows = lens_k1_generators(2, p).rows
    assert all(row.order is None for row in rows)
    assert rows[1].difference_order == p
    assert rows[0].difference_order is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_generator_orders_p_2(n):
    rows = lens_k1_generators(n, 2).rows
    assert rows[1].difference_order == 2 ** (n - 1)


# Even generator

@pytest.mark.parametrize("n, p", [(2, 1), (2, 3), (3, 2)])
def test_even_character_index(n, p):
    graph = lens_graph(n, p)
    index = index_k0(hl_even_character(n, p), graph)
    assert tuple(index.as_vector()) == unit_vector(n, 1)


@pytest.mark.parametrize("n, p", [(2, 2), (3, 3), (4, 2)])
def test_k0_generator_checks(n, p):
    assert all(lens_k0_generator(n, p).values())


def test_lens_report():
    report = lens_report(2, 3)
    assert report["K1"]["display"] == "Z + Z/3"
    assert report["K0"]["display"] == "Z"
    assert all(passed is True for passed in report["checks"].values())
    assert [row["index_vector"] for row in report["generators"]] == [[0, -1], [-1, -1], [-2, -1]]
    assert "projective_formula" not in report["checks"]
    assert lens_report(3, 2)["checks"]["projective_formula"] is True


@pytest.mark.parametrize("n", [5, 6])
def test_projective_difference_order_from_path_counts(n):
    _, k1 = lens_k_homology(n, 2)
    difference = [a - b for a, b in zip(path_count_index(n, 1), path_count_index(n, 0))]
    assert element_order(k1, difference) == 2 ** (n - 1)


def _enumerated_paths(n, m, i):
    graph = sphere_graph(n)
    start, end = f"v{i}", f"v{n}"
    if m == 0:
        return int(start == end)
    total = 0
    for word in product(graph.edges, repeat=m):
        if word[0].src != start or word[-1].dst != end:
            continue
        total += all(a.dst == b.src for a, b in zip(word, word[1:]))
    return total


@pytest.mark.parametrize("n", [2, 3, 4])
def test_path_count_index_matches_enumeration(n):
    for m in range(5):
        assert path_count_index(n, m) == tuple(-_enumerated_paths(n, m, i) for i in range(1, n + 1))
