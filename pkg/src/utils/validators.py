"""
Validation utilities for command-line and file input.
"""
import re
from typing import Any, Dict, Optional, Tuple

ETA_PATTERN = re.compile(r'^\s*([^=\s]+)\s*=\s*([+-]?\d+)\s*$')
SPHERE_PRESET = re.compile(r'^sphere:(\d+)$')
LENS_PRESET = re.compile(r'^lens:(\d+):(\d+)$')


def validate_graph_payload(payload: Any) -> Tuple[bool, str]:
    """
    Validate the shape of a graph JSON object.

    Args:
        payload: Decoded JSON value

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not isinstance(payload, dict):
        return False, "Graph JSON must be an object"

    vertices = payload.get("vertices")
    if not isinstance(vertices, list):
        return False, "Graph JSON requires a 'vertices' list"
    for v in vertices:
        if not isinstance(v, str) or not v:
            return False, f"Vertex id must be a non-empty string, got {v!r}"

    edges = payload.get("edges", [])
    if not isinstance(edges, list):
        return False, "'edges' must be a list"
    for e in edges:
        if not isinstance(e, dict):
            return False, f"Edge entry must be an object, got {e!r}"
        for key in ("id", "src", "dst"):
            if not isinstance(e.get(key), str) or not e.get(key):
                return False, f"Edge entry {e!r} needs a non-empty string '{key}'"

    return True, ""


def validate_eta_assignment(text: str) -> Tuple[bool, str]:
    """
    Validate one `--eta v=k` assignment.

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not text:
        return False, "Eta assignment is empty"

    if not ETA_PATTERN.match(text):
        return False, f"Eta assignment {text!r} must look like vertex=integer"

    return True, ""


def parse_eta_assignments(items) -> Dict[str, int]:
    """Parse validated `v=k` strings; later assignments override earlier ones."""
    values: Dict[str, int] = {}
    for item in items:
        match = ETA_PATTERN.match(item)
        values[match.group(1)] = int(match.group(2))
    return values


def validate_positive_int(value: Any, name: str, minimum: int = 1) -> Tuple[bool, str]:
    if isinstance(value, bool) or not isinstance(value, int):
        return False, f"{name} must be an integer"
    if value < minimum:
        return False, f"{name} must be at least {minimum}, got {value}"
    return True, ""


def parse_preset(text: str) -> Tuple[Optional[Tuple[str, int, int]], str]:
    """
    Parse a preset string.

    Accepts `sphere:n` (n >= 2) and `lens:n:p` (n >= 2, p >= 1).

    Returns:
        Tuple of ((kind, n, p) or None, error_message). p is 1 for spheres.
    """
    if not text:
        return None, "Preset is empty"

    text = text.strip().lower()
    match = SPHERE_PRESET.match(text)
    if match:
        n, p = int(match.group(1)), 1
        kind = "sphere"
    else:
        match = LENS_PRESET.match(text)
        if not match:
            return None, f"Unknown preset {text!r}; expected sphere:n or lens:n:p"
        n, p = int(match.group(1)), int(match.group(2))
        kind = "lens"

    is_valid, error = validate_positive_int(n, "n", minimum=2)
    if not is_valid:
        return None, error
    is_valid, error = validate_positive_int(p, "p", minimum=1)
    if not is_valid:
        return None, error

    return (kind, n, p), ""
