"""
Graph operations: validation, path combinatorics, path powers, and the sphere/lens graphs.
"""
import json
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from models.graph import DirectedGraph, Edge
from utils.exceptions import GraphFormatError, GraphValidationError, UnknownVertexError
from utils.logger import logger
from utils.validators import validate_graph_payload

PATH_SEPARATOR = "."
PATH_ESCAPE = "\\"


def path_edge_id(word: Sequence[str]) -> str:
    """Join an edge word with PATH_SEPARATOR, escaping separators inside the ids."""
    def escape(edge_id: str) -> str:
        return edge_id.replace(PATH_ESCAPE, PATH_ESCAPE * 2).replace(PATH_SEPARATOR, PATH_ESCAPE + PATH_SEPARATOR)

    return PATH_SEPARATOR.join(escape(w) for w in word)


def validate(graph: DirectedGraph) -> List[str]:
    """
    Check the graph invariants.

    Returns:
        One message per violation, naming the offending element; empty iff valid.
    """
    violations: List[str] = []
    seen_vertices = set()
    for v in graph.vertices:
        if v in seen_vertices:
            violations.append(f"duplicate vertex id {v!r}")
        seen_vertices.add(v)

    seen_edges = set()
    for e in graph.edges:
        if e.id in seen_edges:
            violations.append(f"duplicate edge id {e.id!r}")
        seen_edges.add(e.id)
        if e.id in seen_vertices:
            violations.append(f"edge id {e.id!r} is also a vertex id")
        if e.src not in seen_vertices:
            violations.append(f"edge {e.id!r} has unknown source {e.src!r}")
        if e.dst not in seen_vertices:
            violations.append(f"edge {e.id!r} has unknown range {e.dst!r}")
    return violations


def require_valid(graph: DirectedGraph) -> DirectedGraph:
    violations = validate(graph)
    if violations:
        logger.error(f"Graph rejected with {len(violations)} violation(s)")
        raise GraphValidationError(violations)
    return graph


def sinks(graph: DirectedGraph) -> Tuple[str, ...]:
    return graph.sinks()


def nonsinks(graph: DirectedGraph) -> Tuple[str, ...]:
    return graph.nonsinks()


def _require_vertex(graph: DirectedGraph, vertex: str) -> None:
    if vertex not in graph.vertex_index:
        raise UnknownVertexError(f"vertex {vertex!r} is not in the graph")


def count_paths(graph: DirectedGraph, length: int, src: str, dst: str) -> int:
    """Number of edge sequences of the given length from `src` to `dst`."""
    if length < 0:
        raise ValueError("path length must be nonnegative")
    _require_vertex(graph, src)
    _require_vertex(graph, dst)

    counts: Dict[str, int] = {src: 1}
    for _ in range(length):
        step: Dict[str, int] = {}
        for vertex, ways in counts.items():
            for e in graph.out_edges(vertex):
                step[e.dst] = step.get(e.dst, 0) + ways
        counts = step
    return counts.get(dst, 0)


def iter_paths(graph: DirectedGraph, length: int, src: str) -> Iterator[Tuple[Edge, ...]]:
    """Length-`length` paths starting at `src`, lexicographic in out-edge order."""
    if length == 0:
        yield ()
        return
    for e in graph.out_edges(src):
        for rest in iter_paths(graph, length - 1, e.dst):
            yield (e,) + rest


def path_power(graph: DirectedGraph, p: int) -> DirectedGraph:
    """
    The graph of length-p paths: same vertices, one edge per path.

    Edge ids come from `path_edge_id`, so distinct words get distinct ids even
    when the original ids contain the separator. Each edge keeps the flattened
    word in `Edge.path`, so a path-power edge decomposes back into edges of the
    original graph. Paths simply stop at sinks. An id that lands on a vertex id
    is rejected with GraphValidationError.
    """
    if p < 1:
        raise ValueError(f"path power requires p >= 1, got {p}")

    edges: List[Edge] = []
    for v in graph.vertices:
        for path in iter_paths(graph, p, v):
            word = tuple(w for e in path for w in e.word)
            edges.append(Edge(path_edge_id(word), path[0].src, path[-1].dst, word))
    logger.debug(f"path_power(p={p}): {len(graph.edges)} -> {len(edges)} edges")
    return require_valid(DirectedGraph(graph.vertices, tuple(edges)))


def sphere_vertex(i: int) -> str:
    return f"v{i}"


def sphere_edge(i: int, j: int, n: int) -> str:
    return f"e{i}{j}" if n < 10 else f"e{i}_{j}"


def sphere_graph(n: int) -> DirectedGraph:
    """G_n: vertices v_1..v_n, one edge e_ij from v_i to v_j for each i <= j."""
    if n < 2:
        raise ValueError(f"sphere graph requires n >= 2, got {n}")
    vertices = tuple(sphere_vertex(i) for i in range(1, n + 1))
    edges = tuple(
        Edge(sphere_edge(i, j, n), sphere_vertex(i), sphere_vertex(j))
        for i in range(1, n + 1)
        for j in range(i, n + 1)
    )
    return DirectedGraph(vertices, edges)


def lens_graph(n: int, p: int) -> DirectedGraph:
    """G_n^p, the length-p path graph of G_n."""
    return path_power(sphere_graph(n), p)


def loops_without_exit(graph: DirectedGraph) -> List[Tuple[str, ...]]:
    """
    Loops e_1...e_k in which every vertex on the loop emits only the loop edge.

    Each loop is reported once, starting from its first vertex in graph order.
    """
    loops: List[Tuple[str, ...]] = []
    covered = set()
    for start in graph.vertices:
        if start in covered or graph.out_degree(start) != 1:
            continue
        word: List[str] = []
        visited: List[str] = []
        vertex = start
        while graph.out_degree(vertex) == 1 and vertex not in visited:
            visited.append(vertex)
            edge = graph.out_edges(vertex)[0]
            word.append(edge.id)
            vertex = edge.dst
        if vertex == start:
            loops.append(tuple(word))
            covered.update(visited)
    return loops


def graph_from_dict(payload: object) -> DirectedGraph:
    """Build a graph from the JSON object form; raises GraphFormatError on shape errors."""
    is_valid, error = validate_graph_payload(payload)
    if not is_valid:
        raise GraphFormatError(error)
    edges = tuple(Edge(str(e["id"]), str(e["src"]), str(e["dst"])) for e in payload["edges"])
    return DirectedGraph(tuple(str(v) for v in payload["vertices"]), edges)


def load_graph(source: Union[str, Path]) -> DirectedGraph:
    """Read and validate a graph JSON file."""
    try:
        text = Path(source).read_text(encoding="utf-8")
        payload = json.loads(text)
    except (OSError, UnicodeDecodeError) as exc:
        raise GraphFormatError(f"cannot read {source}: {exc}")
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"{source} is not valid JSON: {exc}")

    graph = graph_from_dict(payload)
    logger.info(f"Loaded graph from {source}: {len(graph.vertices)} vertices, {len(graph.edges)} edges")
    return require_valid(graph)


def dump_graph(graph: DirectedGraph) -> str:
    return json.dumps(graph.to_dict(), indent=2)
