"""
Tests for the explicit graded and odd Fredholm modules and their index maps.
"""
import pytest

from core.defects import compressed_index
from core.fredholm import (
    build_k0_module,
    build_k1_module,
    check_relations,
    check_star_condition,
    commutator_ranks,
    corrupt_sign,
    degenerate_module,
    direct_sum,
    edge_index,
    harmonic_defect,
    index_k0,
    index_k1,
    perturbation_ranks,
)
from models.graph import FunctionDomain, VertexFunction
from models.modules import Parity, range_key
from services.corpus import harmonic_eta, nonsink_eta, random_graph
from utils.exceptions import MissingEtaError, ModuleError, NotHarmonicError, StarConditionError


def odd(graph, values):
    return build_k1_module(graph, VertexFunction.on(graph, values, FunctionDomain.NONSINKS))


def even(graph, values):
    return build_k0_module(graph, VertexFunction.on(graph, values))


# Graded modules

def test_zero_eta_gives_identical_representations(g3):
    module = even(g3, {v: 0 for v in g3.vertices})
    assert all(rank == 0 for rank in perturbation_ranks(module).values())
    assert index_k0(module, g3).is_zero()


def test_g2_eta_one(g2):
    module = even(g2, {"v1": 1, "v2": 0})
    assert module.parity == Parity.GRADED
    assert index_k0(module, g2).to_dict() == {"v1": 1, "v2": 0}
    assert perturbation_ranks(module)["v1"] == 1
    v1 = module.operator("v1", 0)
    assert compressed_index(None, v1, v1, module.operator("v1", 1)) == 1


def test_perturbation_rank_of_vertex_is_abs_eta(with_sink):
    for k in (-4, 0, 3):
        module = even(with_sink, {"u": k, "w": 0})
        assert perturbation_ranks(module)["u"] == abs(k)
        assert commutator_ranks(module)["u"] == 2 * abs(k)


def test_non_harmonic_eta_is_rejected(g2):
    with pytest.raises(NotHarmonicError) as info:
        even(g2, {"v1": 0, "v2": 1})
    assert info.value.vertex == "v1"
    assert harmonic_defect(g2, {"v1": 0, "v2": 1}) == ("v1", 1, 0)


def test_missing_eta_is_rejected(g2):
    with pytest.raises(MissingEtaError):
        build_k0_module(g2, VertexFunction({"v1": 1}, FunctionDomain.ALL_VERTICES))


def test_graded_relations_hold(two_loops):
    module = even(two_loops, {"v": 0})
    assert check_relations(module, two_loops, grade=0).passed
    assert check_relations(module, two_loops, grade=1).passed


def test_graded_round_trip_corpus(rng):
    for _ in range(30):
        graph = random_graph(rng, 6, 12)
        eta = harmonic_eta(rng, graph, 5)
        module = even(graph, eta)
        assert index_k0(module, graph).to_dict() == {v: eta[v] for v in graph.vertices}
        assert check_relations(module, graph, grade=1).passed


def test_index_k0_needs_graded_module(one_loop):
    with pytest.raises(ModuleError):
        index_k0(odd(one_loop, {"v": 0}), one_loop)


# Odd modules

def test_one_loop_index(one_loop):
    module = odd(one_loop, {"v": 1})
    assert edge_index(module, "e") == 1
    assert commutator_ranks(module) == {"v": 0, "e": 1}
    result = index_k1(module, one_loop)
    assert result.vertex_index.to_dict() == {"v": 1}


def test_zero_eta_gives_zero_indices(g3):
    module = odd(g3, {v: 0 for v in g3.nonsinks()})
    result = index_k1(module, g3)
    assert result.edge_index.is_zero()
    assert result.vertex_index.is_zero()
    assert all(c == 0 for c in result.vertex_class)


def test_g2_recovers_eta(g2):
    result = index_k1(odd(g2, {"v1": 2, "v2": -1}), g2)
    assert result.edge_index.to_dict() == {"e11": 2, "e12": 0, "e22": -1}
    assert result.vertex_index.to_dict() == {"v1": 2, "v2": -1}


def test_edges_after_the_first_have_index_zero(two_loops):
    module = odd(two_loops, {"v": 4})
    assert edge_index(module, "a") == 4
    assert edge_index(module, "b") == 0


def test_sink_graph(with_sink):
    result = index_k1(odd(with_sink, {"u": 3}), with_sink)
    assert result.vertex_index.to_dict() == {"u": 3}
    # K^1 = Z/2 here, so 3 reduces to the generator
    assert result.vertex_class == (1,)


def test_star_condition_passes(g3):
    report = check_star_condition(odd(g3, {"v1": 1, "v2": -2, "v3": 5}), g3)
    assert report.passed
    assert set(report.ranks) == set(g3.vertices) | {range_key(e.id) for e in g3.edges}


def test_odd_round_trip_corpus(rng):
    for _ in range(30):
        graph = random_graph(rng, 6, 12)
        eta = nonsink_eta(rng, graph, 5)
        module = odd(graph, eta)
        assert index_k1(module, graph).vertex_index.to_dict() == eta
        assert check_relations(module, graph).passed


def test_missing_odd_eta(g2):
    with pytest.raises(MissingEtaError):
        build_k1_module(g2, VertexFunction({"v1": 1}, FunctionDomain.NONSINKS))


def test_degenerate_module(g3):
    result = index_k1(degenerate_module(g3), g3)
    assert result.edge_index.is_zero()
    assert result.vertex_index.is_zero()


def test_direct_sum_is_additive(g2, with_sink):
    for graph, first, second in (
        (g2, {"v1": 2, "v2": -1}, {"v1": -5, "v2": 3}),
        (with_sink, {"u": 1}, {"u": 4}),
    ):
        summed = direct_sum(odd(graph, first), odd(graph, second))
        expected = {v: first[v] + second[v] for v in graph.nonsinks()}
        assert index_k1(summed, graph).vertex_index.to_dict() == expected


def test_direct_sum_rejects_mixed_parity(g2):
    with pytest.raises(ModuleError):
        direct_sum(odd(g2, {"v1": 0, "v2": 0}), even(g2, {"v1": 0, "v2": 0}))


# Negative fixture

def test_corrupted_module_fails_with_rank_one(g2):
    corrupted = corrupt_sign(odd(g2, {"v1": 1, "v2": 0}), g2)
    report = check_star_condition(corrupted, g2)
    assert not report.passed
    assert report.offenders == {"e11e11*": 1, "e12e12*": 1}
    assert report.ranks["v1"] == 0
    with pytest.raises(StarConditionError) as info:
        index_k1(corrupted, g2)
    assert info.value.offenders == {"e11e11*": 1, "e12e12*": 1}


def test_nothing_to_corrupt(one_loop):
    with pytest.raises(ModuleError):
        corrupt_sign(odd(one_loop, {"v": 0}), one_loop)
