"""
Command-line front end. Reports go to stdout; diagnostics go to stderr through
the logger.
"""
import json
import sys
from typing import Any, Dict, List, Optional, Sequence

import click

from config.settings import settings
from services.graph_service import GraphSource, ServiceResult, graph_service
from services.kgroups_service import kgroups_service
from services.lens_service import lens_service
from services.module_service import module_service
from services.verification_service import verification_service
from utils.error_translator import error_translator
from utils.exceptions import KHomologyError, PresetError
from utils.formatters import format_check, format_function, format_order, format_table
from utils.logger import logger
from utils.validators import parse_eta_assignments, parse_preset, validate_eta_assignment

FORMATS = click.Choice(["text", "json"])


def _fail(error: Exception) -> None:
    click.echo(f"error: {error_translator.translate(error)}", err=True)
    sys.exit(error_translator.exit_code(error))


def _resolve(path: Optional[str], preset: Optional[str]) -> GraphSource:
    try:
        return graph_service.resolve(path, preset)
    except KHomologyError as exc:
        logger.error(f"Input rejected: {exc.message}")
        _fail(exc)


def _eta_option(ctx, param, values: Sequence[str]) -> Dict[str, int]:
    for value in values:
        is_valid, error = validate_eta_assignment(value)
        if not is_valid:
            raise click.BadParameter(error)
    return parse_eta_assignments(values)


def _render_group(title: str, group: Dict[str, Any]) -> List[str]:
    lines = [f"{title} = {group['display']}"]
    if group["primary"] != group["display"]:
        lines.append(f"  primary: {group['primary']}")
    for generator in group["generators"]:
        lines.append(f"  [{format_order(generator['order'])}] {generator['expression']}")
    return lines


def _render_checks(checks: Dict[str, Any]) -> List[str]:
    return [f"  {format_check(passed is True)}  {name}" for name, passed in checks.items()]


def _render_text(command: str, report: Dict[str, Any]) -> str:
    lines: List[str] = []
    if command == "kgroups":
        lines += _render_group("K_0", report["K0"]) + _render_group("K_1", report["K1"])
        lines.append("vertex classes in K_0:")
        lines += [f"  [{v}] = {coords}" for v, coords in report["vertex_classes"].items()]
        if report["loops_without_exit"]:
            loops = "; ".join(" ".join(loop) for loop in report["loops_without_exit"])
            lines.append(f"loops without exit: {loops}")
    elif command == "khomology":
        lines += _render_group("K^0", report["K0"]) + _render_group("K^1", report["K1"])
        lines += _render_group("K^1 (edge presentation)", report["K1_edges"])
        lines += ["checks:"] + _render_checks(report["checks"])
    elif command == "k0-module":
        lines.append(f"eta:   {format_function(report['eta'])}")
        lines.append(f"index: {format_function(report['index'])}")
        lines.append(f"class in K^0: {report['class']}")
        lines.append(format_table(
            [(x, report["perturbation_ranks"][x], report["commutator_ranks"][x]) for x in report["commutator_ranks"]],
            ["generator", "rank(rho1-rho0)", "rank [F, rho]"],
        ))
        lines += ["checks:"] + _render_checks({
            "round_trip": report["round_trip"],
            "relations_rho0": report["relations"]["rho0"]["passed"],
            "relations_rho1": report["relations"]["rho1"]["passed"],
        })
    elif command == "k1-module":
        lines.append(f"eta:          {format_function(report['eta'])}")
        lines.append(f"vertex index: {format_function(report['vertex_index'])}")
        lines.append(f"edge index:   {format_function(report['edge_index'])}")
        lines.append(f"class in K^1: {report['vertex_class']} (edge presentation {report['edge_class']})")
        lines += _render_group("K^1", report["K1"])
        lines.append(format_table(report["commutator_ranks"].items(), ["generator", "rank [F, rho]"]))
        lines += ["checks:"] + _render_checks({
            "star_condition": report["star_condition"]["passed"],
            "relations": report["relations"]["passed"],
            "round_trip": report["round_trip"],
        })
    elif command == "lens":
        lines.append(f"lens space n={report['n']} p={report['p']}")
        lines += _render_group("K^0", report["K0"]) + _render_group("K^1", report["K1"])
        lines.append(format_table(
            [
                (row["m"], row["index_vector"], format_order(row["order"]),
                 "-" if row["difference_order"] is None else format_order(row["difference_order"]))
                for row in report["generators"]
            ],
            ["m", "Index F_m", "order", "order F_m - F_0"],
        ))
        lines += ["checks:"] + _render_checks(report["checks"])
    return "\n".join(lines)


def _emit(command: str, result: ServiceResult, output: str) -> None:
    if not result.success:
        click.echo(f"error: {result.message}", err=True)
    if output == "json":
        click.echo(json.dumps(result.report, indent=2))
    elif result.success or "error" not in result.report:
        click.echo(_render_text(command, result.report))
    sys.exit(result.exit_code)


def _input_options(func):
    func = click.option("--preset", help="sphere:n or lens:n:p instead of a graph file.")(func)
    func = click.argument("graph", required=False, type=click.Path(dir_okay=False))(func)
    return func


def _format_option(func):
    return click.option("--format", "output", type=FORMATS, default="text", show_default=True)(func)


@click.group()
@click.version_option(settings.APP_VERSION, prog_name=settings.APP_NAME)
def cli():
    """K-theory and K-homology of graph C*-algebras."""


@cli.command()
@_input_options
@_format_option
def kgroups(graph, preset, output):
    """K_0 = coker ∂ and K_1 = ker ∂ of the graph algebra."""
    source = _resolve(graph, preset)
    _emit("kgroups", kgroups_service.kgroups(source.graph), output)


@cli.command()
@_input_options
@_format_option
def khomology(graph, preset, output):
    """K^0 = ker ∂^∨ and K^1 = coker ∂^∨ of the graph algebra."""
    source = _resolve(graph, preset)
    _emit("khomology", kgroups_service.khomology(source.graph), output)


@cli.command("k0-module")
@_input_options
@_format_option
@click.option("--eta", multiple=True, callback=_eta_option, help="v=k, once per vertex.")
def k0_module(graph, preset, output, eta):
    """Build the graded module for a harmonic eta and recover eta as its index."""
    source = _resolve(graph, preset)
    _emit("k0-module", module_service.k0_module(source.graph, eta), output)


@cli.command("k1-module")
@_input_options
@_format_option
@click.option("--eta", multiple=True, callback=_eta_option, help="v=k, once per non-sink.")
def k1_module(graph, preset, output, eta):
    """Build the odd module for eta on the non-sinks and recover eta as its index."""
    source = _resolve(graph, preset)
    _emit("k1-module", module_service.k1_module(source.graph, eta), output)


@cli.command()
@click.option("--preset", required=True, help="lens:n:p (or sphere:n for p = 1).")
@_format_option
def lens(preset, output):
    """K-homology of a quantum lens space with its Fredholm module generators."""
    parsed, error = parse_preset(preset)
    if parsed is None:
        _fail(PresetError(error))
    _, n, p = parsed
    _emit("lens", lens_service.lens(n, p), output)


@cli.command()
@click.option("--seed", type=int, default=None, help=f"Corpus seed (default {settings.SEED}, or KHOM_SEED).")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--suite", "suites", multiple=True, help="Run only the named suites.")
@click.option("--corrupt", is_flag=True, help="Feed the corrupted module into the module suite.")
@_format_option
def verify(seed, jobs, suites, corrupt, output):
    """Run the randomized invariant corpus."""
    result = verification_service.run(seed=seed, jobs=jobs, corrupt=corrupt, suites=list(suites) or None)
    if output == "json":
        click.echo(json.dumps({"summary": result.summary, "failures": result.failures}, indent=2))
    else:
        summary = result.summary
        if summary:
            click.echo(f"seed {summary['seed']}")
            click.echo(format_table(
                [(name, data["cases"], data["failures"], data["status"]) for name, data in summary["suites"].items()],
                ["suite", "cases", "failures", "status"],
            ))
        for failure in result.failures[:10]:
            click.echo(f"FAIL [{failure['suite']}] {failure['message']}")
            if failure["reproducer"] is not None:
                click.echo(f"  reproducer: {json.dumps(failure['reproducer'])}")
        click.echo(result.message)
    sys.exit(result.exit_code)
