"""
Tests for validators, formatters and the error translator.
"""
import pytest

from config.settings import settings
from utils.error_translator import error_translator
from utils.exceptions import (
    GraphFormatError,
    GraphValidationError,
    MissingEtaError,
    PresetError,
    StarConditionError,
)
from utils.formatters import (
    format_check,
    format_function,
    format_group,
    format_order,
    format_primary,
    format_table,
    format_vector,
    primary_parts,
)
from utils.validators import (
    parse_eta_assignments,
    parse_preset,
    validate_eta_assignment,
    validate_graph_payload,
    validate_positive_int,
)


@pytest.mark.parametrize("text, expected", [
    ("sphere:3", ("sphere", 3, 1)),
    ("lens:2:5", ("lens", 2, 5)),
    (" LENS:4:1 ", ("lens", 4, 1)),
])
def test_parse_preset(text, expected):
    assert parse_preset(text) == (expected, "")


@pytest.mark.parametrize("text", ["", "sphere", "sphere:1", "lens:2", "lens:1:3", "lens:2:0", "torus:2"])
def test_parse_preset_rejects(text):
    parsed, error = parse_preset(text)
    assert parsed is None
    assert error


def test_eta_assignments():
    assert validate_eta_assignment("v1=-3") == (True, "")
    assert validate_eta_assignment(" v = +2 ")[0]
    assert not validate_eta_assignment("v1")[0]
    assert not validate_eta_assignment("v1=x")[0]
    assert not validate_eta_assignment("")[0]
    assert parse_eta_assignments(["a=1", "b=-2", "a=5"]) == {"a": 5, "b": -2}


def test_positive_int():
    assert validate_positive_int(3, "n") == (True, "")
    assert not validate_positive_int(True, "n")[0]
    assert not validate_positive_int(0, "n")[0]
    assert validate_positive_int(0, "p", minimum=0)[0]


def test_graph_payload_shapes():
    assert validate_graph_payload({"vertices": ["v"]}) == (True, "")
    assert not validate_graph_payload([])[0]
    assert not validate_graph_payload({"vertices": "v"})[0]
    assert not validate_graph_payload({"vertices": [""]})[0]
    assert not validate_graph_payload({"vertices": ["v"], "edges": {}})[0]
    assert not validate_graph_payload({"vertices": ["v"], "edges": [{"id": "e", "src": "v"}]})[0]


def test_format_group():
    assert format_group((), 0) == "0"
    assert format_group((), 1) == "Z"
    assert format_group((2, 4), 3) == "Z^3 + Z/2 + Z/4"
    assert format_group((6,), 0) == "Z/6"


def test_primary_decomposition_format():
    assert primary_parts([12, 6]) == [2, 3, 3, 4]
    assert format_primary((6,), 1) == "Z + Z/2 + Z/3"


def test_format_vector():
    assert format_vector([1, 0, -2], ["v1", "v2", "v3"]) == "v1 - 2*v3"
    assert format_vector([-1, 3], ["a", "b"]) == "-a + 3*b"
    assert format_vector([0, 0], ["a", "b"]) == "0"


def test_small_formatters():
    assert format_function({}) == "(empty)"
    assert format_function({"v": 1, "w": -2}) == "v=1, w=-2"
    assert format_order(None) == "infinite"
    assert format_order(4) == "4"
    assert format_check(True) == "PASS"
    assert format_check(False) == "FAIL"


def test_format_table():
    table = format_table([("a", 1), ("bbb", 22)], ["x", "rank"])
    assert table.splitlines() == ["x    rank", "a    1", "bbb  22"]


@pytest.mark.parametrize("error, code", [
    (GraphFormatError("bad"), settings.EXIT_PARSE_ERROR),
    (PresetError("bad"), settings.EXIT_PARSE_ERROR),
    (GraphValidationError(["edge 'e' has unknown source 'x'"]), settings.EXIT_VALIDATION_ERROR),
    (MissingEtaError("no eta"), settings.EXIT_MISSING_ETA),
    (StarConditionError({"e11e11*": 1}), settings.EXIT_FAILURE),
    (RuntimeError("boom"), settings.EXIT_FAILURE),
])
def test_exit_codes(error, code):
    assert error_translator.exit_code(error) == code


def test_translate_and_describe():
    error = GraphValidationError(["duplicate vertex id 'v'"])
    message = error_translator.translate(error)
    assert message.startswith("The graph is not a valid finite directed graph")
    assert "duplicate vertex id 'v'" in message
    described = error_translator.describe(error)
    assert described["code"] == "validation_error"
    assert described["details"] == ["duplicate vertex id 'v'"]
    assert error_translator.translate("missing_eta").startswith("An eta value")
    assert error_translator.translate(ValueError("plain")) == "plain"
