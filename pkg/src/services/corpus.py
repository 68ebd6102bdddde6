"""
Seeded random corpora for the invariant suites. Same seed, same corpus.
"""
import random
from typing import Dict

import numpy as np

from core.complexes import dualize, vertex_complex
from core.linalg import kernel_basis
from models.graph import DirectedGraph


def suite_rng(seed: int, suite: str) -> random.Random:
    """Independent stream per suite, so suites can run in any order."""
    return random.Random(f"{seed}:{suite}")


def random_matrix(rng: random.Random, max_dim: int, bound: int) -> np.ndarray:
    """Integer matrix up to max_dim x max_dim with entries in [-bound, bound], roughly half zero."""
    rows, cols = rng.randint(0, max_dim), rng.randint(0, max_dim)
    matrix = np.zeros((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            if rng.random() < 0.5:
                matrix[i, j] = rng.randint(-bound, bound)
    return matrix


def random_graph(rng: random.Random, max_vertices: int, max_edges: int) -> DirectedGraph:
    """Random multigraph on 1..max_vertices vertices, loops and parallel edges allowed."""
    size = rng.randint(1, max_vertices)
    vertices = [f"v{i}" for i in range(1, size + 1)]
    edges = [
        (f"e{k}", rng.choice(vertices), rng.choice(vertices))
        for k in range(rng.randint(0, max_edges))
    ]
    return DirectedGraph.build(vertices, edges)


def harmonic_eta(rng: random.Random, graph: DirectedGraph, bound: int) -> Dict[str, int]:
    """Random element of ker ∂^∨ with |eta(v)| <= bound (zero when nothing small exists)."""
    dual = dualize(vertex_complex(graph))
    basis = [b for b in kernel_basis(dual.matrix) if max(map(abs, b), default=0) <= bound]
    for _ in range(20):
        vector = [0] * len(graph.vertices)
        for b in basis:
            c = rng.randint(-2, 2)
            vector = [x + c * y for x, y in zip(vector, b)]
        if max(map(abs, vector), default=0) <= bound:
            return dict(zip(graph.vertices, vector))
    return {v: 0 for v in graph.vertices}


def nonsink_eta(rng: random.Random, graph: DirectedGraph, bound: int) -> Dict[str, int]:
    return {v: rng.randint(-bound, bound) for v in graph.nonsinks()}
