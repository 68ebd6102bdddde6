"""
Graph input service: resolves the CLI input source to a validated graph.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from config.settings import settings
from core.graphs import lens_graph, load_graph, require_valid, sphere_graph
from models.graph import DirectedGraph
from utils.error_translator import error_translator
from utils.exceptions import PresetError
from utils.logger import logger
from utils.validators import parse_preset


@dataclass
class ServiceResult:
    """Result container for report-producing operations."""
    success: bool
    message: str
    report: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = settings.EXIT_OK

    @classmethod
    def failed(cls, error: Exception, report: Optional[Dict[str, Any]] = None) -> "ServiceResult":
        return cls(
            success=False,
            message=error_translator.translate(error),
            report=report or {"error": error_translator.describe(error)},
            exit_code=error_translator.exit_code(error),
        )


@dataclass(frozen=True)
class GraphSource:
    graph: DirectedGraph
    description: str
    preset: Optional[Tuple[str, int, int]] = None


class GraphService:
    """Loads graph files and builds preset graphs."""

    def resolve(self, path: Optional[str], preset: Optional[str]) -> GraphSource:
        """
        Exactly one of `path` and `preset` must be given.

        Raises:
            PresetError: both or neither given, or the preset does not parse
            GraphFormatError / GraphValidationError: the file is unusable
        """
        if bool(path) == bool(preset):
            raise PresetError("give exactly one input: a graph file or --preset")

        if path:
            return GraphSource(load_graph(path), str(path))

        parsed, error = parse_preset(preset)
        if parsed is None:
            raise PresetError(error)
        kind, n, p = parsed
        graph = sphere_graph(n) if kind == "sphere" else lens_graph(n, p)
        logger.info(f"Preset {preset}: {len(graph.vertices)} vertices, {len(graph.edges)} edges")
        return GraphSource(require_valid(graph), preset, parsed)


# Global singleton
graph_service = GraphService()
