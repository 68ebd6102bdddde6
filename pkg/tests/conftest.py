"""
Shared fixtures. Puts src/ on the import path the same way run.py does.
"""
import os
import random
import sys

import pytest

_SRC = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src")
if _SRC not in sys.path:
    sys.path.insert(0, _SRC)

from core.graphs import sphere_graph  # noqa: E402
from models.graph import DirectedGraph  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(1729)


@pytest.fixture
def one_loop():
    """One vertex with one loop: C*(G) = C(T)."""
    return DirectedGraph.build(["v"], [("e", "v", "v")])


@pytest.fixture
def single_sink():
    return DirectedGraph.build(["v"], [])


@pytest.fixture
def g2():
    """G_2: e11, e12 out of v1 and e22 at v2."""
    return sphere_graph(2)


@pytest.fixture
def g3():
    return sphere_graph(3)


@pytest.fixture
def two_loops():
    """One vertex with two loops: the Cuntz algebra O_2."""
    return DirectedGraph.build(["v"], [("a", "v", "v"), ("b", "v", "v")])


@pytest.fixture
def with_sink():
    """u emits two edges into the sink w and one loop."""
    return DirectedGraph.build(
        ["u", "w"],
        [("f", "u", "w"), ("g", "u", "w"), ("h", "u", "u")],
    )
