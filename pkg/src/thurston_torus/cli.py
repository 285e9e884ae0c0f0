"""Command-line interface (CLI) for thurston-torus.

The CLI is a thin wrapper: it reads JSON point files, calls the library and
prints JSON (or CSV / SVG) on standard output. Diagnostics go to standard
error. Exit status 1 means the library rejected the question (for example a
target outside the out-envelope), exit status 2 means the input could not be
read or parsed.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, NoReturn

import numpy as np
import typer
from rich.console import Console
from rich.logging import RichHandler

from .constants import (
    BUDGET_ENV_VAR,
    EPS0_DEFAULT,
    EXIT_DOMAIN_ERROR,
    EXIT_IO_ERROR,
    EXIT_OK,
    SEARCH_MAX_NODES_DEFAULT,
)
from .exceptions import ThurstonError
from .experiments import ExperimentConfig, report, report_rows
from .farey import Marking, Slope, marking_geodesic, pivots
from .hooks import LoggingHook
from .metric import thurston_dist
from .norm import flat_segment, unit_sphere
from .render import from_chart, render_envelopes, render_sphere
from .search import SearchBudget
from .stretch_envelope import Sign, envelope, stretch_point
from .torus_model import TorusPoint, fn_coords

# ---------------------------------------------------------------------------- #
# Typer application                                                            #
# ---------------------------------------------------------------------------- #

app = typer.Typer(
    name="thurston-torus",
    help="Thurston metric computations on the Teichmüller space of the once-punctured torus.",
    add_completion=False,
)

console = Console()
err_console = Console(stderr=True)

# ---------------------------------------------------------------------------- #
# Helpers                                                                      #
# ---------------------------------------------------------------------------- #


def _fail(exc: Exception, code: int) -> NoReturn:
    err_console.print(f"[bold red]Error:[/bold red] {type(exc).__name__}: {exc}", markup=True, highlight=False)
    raise typer.Exit(code=code)


@contextmanager
def _reading() -> Iterator[None]:
    """Map unreadable or invalid input to exit status 2."""
    try:
        yield
    except (OSError, ValueError, KeyError, ThurstonError) as exc:
        _fail(exc, EXIT_IO_ERROR)


@contextmanager
def _computing() -> Iterator[None]:
    """Map library errors to exit status 1."""
    try:
        yield
    except ThurstonError as exc:
        _fail(exc, EXIT_DOMAIN_ERROR)


def _load_point(path: Path) -> TorusPoint:
    """Read ``{"x", "y", "z"}`` or chart input ``{"u", "v"[, "base"]}``."""
    data = json.loads(path.read_text(encoding="utf-8"))
    if "u" in data:
        return from_chart(float(data["u"]), float(data["v"]), Slope.parse(str(data.get("base", "1/0"))))
    return TorusPoint.from_dict(data)


def _emit(data: Any) -> None:
    typer.echo(json.dumps(data, indent=2, sort_keys=True))


def _budget(max_nodes: int) -> SearchBudget:
    return SearchBudget().with_nodes(max_nodes)


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


# ---------------------------------------------------------------------------- #
# Global options / root command                                                #
# ---------------------------------------------------------------------------- #

# Define options as module-level constants to avoid B008
VERBOSE_OPTION = typer.Option(False, "--verbose", "-v", help="Log search progress at debug level.")
SEED_OPTION = typer.Option(0, "--seed", help="Seed for every random sample (report sample times).")
BUDGET_OPTION = typer.Option(
    SEARCH_MAX_NODES_DEFAULT,
    "--budget",
    envvar=BUDGET_ENV_VAR,
    help=f"Node expansions per slope search. Defaults to the {BUDGET_ENV_VAR} environment variable if set.",
)
FROM_OPTION = typer.Option(..., "--from", help="JSON file with the start point.")
TO_OPTION = typer.Option(..., "--to", help="JSON file with the end point.")
POINT_OPTION = typer.Option(..., "--point", "-p", help="JSON file with the point.")
ALPHA_OPTION = typer.Option(..., "--alpha", "-a", help="Slope p/q of the curve.")


@app.callback()
def main(ctx: typer.Context, verbose: bool = VERBOSE_OPTION, seed: int = SEED_OPTION) -> None:
    """Thurston metric computations on the Teichmüller space of the once-punctured torus."""
    _configure_logging(verbose)
    ctx.obj = {"seed": seed, "hooks": [LoggingHook()] if verbose else []}


# ---------------------------------------------------------------------------- #
# Commands                                                                     #
# ---------------------------------------------------------------------------- #


@app.command("dist")
def dist(
    ctx: typer.Context, from_path: Path = FROM_OPTION, to_path: Path = TO_OPTION, budget: int = BUDGET_OPTION
) -> None:
    """Thurston distance from one point to another, with the maximally stretched curve."""
    with _reading():
        X, Y = _load_point(from_path), _load_point(to_path)
    with _computing():
        result = thurston_dist(X, Y, _budget(budget), hooks=ctx.obj["hooks"] if ctx.obj else ())
    _emit(result.to_dict())


@app.command("stretch")
def stretch(
    point: Path = POINT_OPTION,
    alpha: str = ALPHA_OPTION,
    sign: Sign = typer.Option(Sign.PLUS, "--sign", "-s", help="Completion of the curve to stretch along."),
    t: float = typer.Option(..., "--t", "--time", help="Stretch time (negative times run backwards)."),
) -> None:
    """Point reached by stretching along a curve for a given time."""
    with _reading():
        X, a = _load_point(point), Slope.parse(alpha)
    with _computing():
        Y = stretch_point(X, a, sign, t)
        coords = fn_coords(Y, a)
    _emit({"point": Y.to_dict(), "fn": coords.to_dict()})


@app.command("envelope")
def envelope_(
    from_path: Path = FROM_OPTION,
    to_path: Path = TO_OPTION,
    budget: int = BUDGET_OPTION,
    strict: bool = typer.Option(False, "--strict", help="Refuse non-isolated witnesses even on a stretch ray."),
) -> None:
    """Envelope of geodesics between two points: witness, corners and edge durations."""
    with _reading():
        X, Y = _load_point(from_path), _load_point(to_path)
    with _computing():
        quad = envelope(X, Y, _budget(budget), strict=strict)
    _emit(quad.to_dict())


@app.command("pivots")
def pivots_(
    from_marking: str = typer.Option(..., "--from", help="Start marking p/q,r/s."),
    to_marking: str = typer.Option(..., "--to", help="End marking p/q,r/s."),
) -> None:
    """Pivots of the marking-graph geodesic between two markings."""
    with _reading():
        m1, m2 = Marking.parse(from_marking), Marking.parse(to_marking)
    _emit(
        {
            "geodesic": [m.to_dict() for m in marking_geodesic(m1, m2)],
            "pivots": pivots(m1, m2).to_dict(),
        }
    )


@app.command("norm-sphere")
def norm_sphere(
    point: Path = POINT_OPTION,
    samples: int = typer.Option(64, "--samples", "-n", help="Number of sampled directions (at least 16)."),
    svg: Path | None = typer.Option(None, "--svg", help="Also write the sphere as an SVG figure."),
    budget: int = BUDGET_OPTION,
) -> None:
    """Sampled unit sphere of the Thurston norm with its flat segments."""
    with _reading():
        X = _load_point(point)
    with _computing():
        sphere = unit_sphere(X, samples, _budget(budget))
    if svg is not None:
        with _reading():
            svg.write_text(render_sphere(sphere), encoding="utf-8")
    _emit(sphere.to_dict())


@app.command("flat")
def flat(point: Path = POINT_OPTION, alpha: str = ALPHA_OPTION, budget: int = BUDGET_OPTION) -> None:
    """Flat segment of a curve on the unit sphere."""
    with _reading():
        X, a = _load_point(point), Slope.parse(alpha)
    with _computing():
        segment = flat_segment(X, a, _budget(budget))
    _emit(segment.to_dict())


@app.command("report")
def report_(
    ctx: typer.Context,
    from_path: Path = FROM_OPTION,
    to_path: Path = TO_OPTION,
    eps0: float = typer.Option(EPS0_DEFAULT, "--eps0", help="Thickness threshold for active intervals."),
    as_csv: bool = typer.Option(False, "--csv", help="Emit one CSV row per candidate curve."),
    budget: int = BUDGET_OPTION,
) -> None:
    """Short curves, pivots and additivity along the envelope geodesic."""
    with _reading():
        X, Y = _load_point(from_path), _load_point(to_path)
        config = ExperimentConfig(eps0=eps0, budget=_budget(budget))
    rng = np.random.default_rng(ctx.obj["seed"] if ctx.obj else 0)
    with _computing():
        data = report(X, Y, config, rng)
    if not as_csv:
        _emit(data)
        return
    rows = report_rows(data)
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer,
        fieldnames=["slope", "min_length", "t_min", "interval_start", "interval_end", "pivot_coefficient"],
        lineterminator="\n",
    )
    writer.writeheader()
    writer.writerows(rows)
    typer.echo(buffer.getvalue(), nl=False)


@app.command("render")
def render(
    point: Path = POINT_OPTION,
    curves: str = typer.Option("", "--curves", "-c", help="Comma-separated slopes whose in-envelopes are drawn."),
    to_path: Path | None = typer.Option(None, "--to", help="Also draw the envelope towards this point."),
    horizon: float = typer.Option(2.0, "--horizon", "-T", help="Length of the drawn rays in stretch time."),
    out: Path | None = typer.Option(None, "--out", "-o", help="Write the SVG here instead of standard output."),
    budget: int = BUDGET_OPTION,
) -> None:
    """In-envelopes of curves through a point, as an SVG figure in the disk chart."""
    with _reading():
        X = _load_point(point)
        slopes = [Slope.parse(c.strip()) for c in curves.split(",") if c.strip()]
        Y = _load_point(to_path) if to_path is not None else None
    with _computing():
        quad = envelope(X, Y, _budget(budget)) if Y is not None else None
        text = render_envelopes(X, slopes, horizon, quad)
    if out is None:
        typer.echo(text, nl=False)
        raise typer.Exit(code=EXIT_OK)
    with _reading():
        out.write_text(text, encoding="utf-8")
    console.print(f"[bold green]Success![/bold green] Figure written to [magenta]{out}[/magenta]")


# ---------------------------------------------------------------------------- #
# Entrypoint                                                                   #
# ---------------------------------------------------------------------------- #

if __name__ == "__main__":
    app()
