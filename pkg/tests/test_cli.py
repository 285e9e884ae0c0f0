"""Test suite for the CLI."""

from __future__ import annotations

import json
import math
import re
from collections.abc import Callable
from pathlib import Path

import pytest
from typer.testing import CliRunner

from thurston_torus.cli import app
from thurston_torus.farey import INFINITY, ZERO, Marking, Slope, pivots
from thurston_torus.render import svg_is_well_formed
from thurston_torus.stretch_envelope import Sign, stretch_point
from thurston_torus.torus_model import TorusPoint

runner = CliRunner()

PointFile = Callable[..., Path]


def strip_ansi_codes(text: str) -> str:
    """Remove ANSI escape codes from text."""
    ansi_escape = re.compile(r"\x1B(?:[@-Z\\-_]|\[[0-?]*[ -/]*[@-~])")
    return ansi_escape.sub("", text)


@pytest.fixture
def endpoints(thick_point: TorusPoint, point_file: PointFile) -> tuple[Path, Path]:
    """Writes a point and its image under a short stretch to JSON files."""
    target = stretch_point(thick_point, INFINITY, Sign.PLUS, 0.4)
    return point_file(thick_point, "start.json"), point_file(target, "end.json")


def test_dist_to_itself(thick_point: TorusPoint, point_file: PointFile) -> None:
    """The 'dist' command should report zero between a point and itself."""
    path = point_file(thick_point)

    result = runner.invoke(app, ["dist", "--from", str(path), "--to", str(path)])

    assert result.exit_code == 0
    assert json.loads(result.stdout)["value"] == 0.0


def test_dist_along_stretch_ray(endpoints: tuple[Path, Path]) -> None:
    """The 'dist' command should recover the stretch time and the stretched curve."""
    start, end = endpoints

    result = runner.invoke(app, ["dist", "--from", str(start), "--to", str(end)])

    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["value"] == pytest.approx(0.4, abs=1e-6)
    assert data["witness"] == "1/0"


def test_dist_verbose_logs_search(endpoints: tuple[Path, Path]) -> None:
    """With --verbose the 'dist' command should log the search incumbents."""
    start, end = endpoints

    result = runner.invoke(app, ["--verbose", "dist", "--from", str(start), "--to", str(end)])

    assert result.exit_code == 0
    assert "incumbent" in result.output
    assert "layer" in result.output


def test_dist_budget_from_env(endpoints: tuple[Path, Path]) -> None:
    """The search budget should be read from the environment when not given."""
    start, end = endpoints

    result = runner.invoke(app, ["dist", "--from", str(start), "--to", str(end)], env={"THURSTON_BUDGET": "1"})

    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["saturated"] is True
    assert data["value"] <= 0.4 + 1e-9


def test_dist_missing_option(point_file: PointFile, thick_point: TorusPoint) -> None:
    """The 'dist' command should fail if required options are missing."""
    result = runner.invoke(app, ["dist", "--from", str(point_file(thick_point))])
    assert result.exit_code != 0
    clean_output = strip_ansi_codes(result.output)
    assert "Missing option" in clean_output
    assert "--to" in clean_output


@pytest.mark.parametrize("content", ["not json", '{"x": 3.0, "y": 3.0}'])
def test_unreadable_point_file(tmp_path: Path, content: str) -> None:
    """Broken or incomplete point files should exit with status 2."""
    path = tmp_path / "broken.json"
    path.write_text(content, encoding="utf-8")

    result = runner.invoke(app, ["dist", "--from", str(path), "--to", str(path)])

    assert result.exit_code == 2
    assert "Error:" in strip_ansi_codes(result.output)


def test_stretch(thick_point: TorusPoint, point_file: PointFile) -> None:
    """The 'stretch' command should print the new point and its coordinates about the curve."""
    result = runner.invoke(app, ["stretch", "-p", str(point_file(thick_point)), "-a", "1/0", "--t", "0.5"])

    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert set(data) == {"point", "fn"}
    assert data["fn"]["alpha"] == "1/0"
    assert data["fn"]["length"] == pytest.approx(2.0 * math.exp(0.5), rel=1e-9)


def test_stretch_out_of_range(thick_point: TorusPoint, point_file: PointFile) -> None:
    """The 'stretch' command should exit with status 1 when the library gives up."""
    result = runner.invoke(app, ["stretch", "-p", str(point_file(thick_point)), "-a", "1/0", "--t", "7"])

    assert result.exit_code == 1
    assert "Error:" in strip_ansi_codes(result.output)


def test_stretch_bad_slope(thick_point: TorusPoint, point_file: PointFile) -> None:
    """An unparsable slope is an input error."""
    result = runner.invoke(app, ["stretch", "-p", str(point_file(thick_point)), "-a", "one/zero", "--t", "0.5"])

    assert result.exit_code == 2


def test_chart_point_input(point_file: PointFile) -> None:
    """Points may be given in the half-plane chart."""
    path = point_file({"u": 0.0, "v": math.pi / 2.0, "base": "0/1"})

    result = runner.invoke(app, ["stretch", "-p", str(path), "-a", "0/1", "--t", "0.0"])

    assert result.exit_code == 0
    assert json.loads(result.stdout)["fn"]["length"] == pytest.approx(2.0, rel=1e-9)


def test_envelope(thick_point: TorusPoint, point_file: PointFile) -> None:
    """The 'envelope' command should print the witness and the four edges."""
    corner = stretch_point(thick_point, INFINITY, Sign.PLUS, 0.5)
    target = stretch_point(corner, INFINITY, Sign.MINUS, 0.5)
    start, end = point_file(thick_point, "start.json"), point_file(target, "end.json")

    result = runner.invoke(app, ["envelope", "--from", str(start), "--to", str(end)])

    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["witness"] == "1/0"
    assert len(data["edges"]) == 4


def test_pivots_match_library() -> None:
    """The 'pivots' command should print exactly the library's pivot sequence."""
    result = runner.invoke(app, ["pivots", "--from", "1/0,0/1", "--to", "1/0,5/1"])

    assert result.exit_code == 0
    expected = pivots(Marking(INFINITY, ZERO), Marking(INFINITY, Slope(5, 1))).to_dict()
    data = json.loads(result.stdout)
    assert data["pivots"] == json.loads(json.dumps(expected))
    assert data["geodesic"][0] == str(Marking(INFINITY, ZERO))


def test_pivots_bad_marking() -> None:
    """A marking without a comma should be rejected as input."""
    result = runner.invoke(app, ["pivots", "--from", "1/0", "--to", "1/0,5/1"])

    assert result.exit_code == 2
    assert "Error:" in strip_ansi_codes(result.output)


def test_flat(thick_point: TorusPoint, point_file: PointFile) -> None:
    """The 'flat' command should print both endpoints and the length."""
    result = runner.invoke(app, ["flat", "-p", str(point_file(thick_point)), "-a", "0/1"])

    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["alpha"] == "0/1"
    assert data["length"] > 0


def test_norm_sphere_writes_svg(thick_point: TorusPoint, point_file: PointFile, tmp_path: Path) -> None:
    """The 'norm-sphere' command should print the samples and write the figure."""
    figure = tmp_path / "sphere.svg"

    result = runner.invoke(
        app, ["norm-sphere", "-p", str(point_file(thick_point)), "--samples", "16", "--svg", str(figure)]
    )

    assert result.exit_code == 0
    assert len(json.loads(result.stdout)["samples"]) == 16
    assert svg_is_well_formed(figure.read_text(encoding="utf-8"))


def test_report_csv(endpoints: tuple[Path, Path]) -> None:
    """The 'report' command should emit a CSV header and one row per candidate."""
    start, end = endpoints

    result = runner.invoke(app, ["--seed", "3", "report", "--from", str(start), "--to", str(end), "--csv"])

    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "slope,min_length,t_min,interval_start,interval_end,pivot_coefficient"
    assert len(lines) > 1


def test_render_to_file(thick_point: TorusPoint, point_file: PointFile, tmp_path: Path) -> None:
    """The 'render' command should write a well-formed, reproducible figure."""
    path = point_file(thick_point)
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"

    for out in (first, second):
        result = runner.invoke(app, ["render", "-p", str(path), "--curves", "1/0, 0/1", "-T", "1.0", "--out", str(out)])
        assert result.exit_code == 0
        assert "Success!" in result.stdout

    text = first.read_text(encoding="utf-8")
    assert svg_is_well_formed(text)
    assert text == second.read_text(encoding="utf-8")


def test_render_to_stdout(thick_point: TorusPoint, point_file: PointFile) -> None:
    """Without --out the figure goes to standard output."""
    result = runner.invoke(app, ["render", "-p", str(point_file(thick_point))])

    assert result.exit_code == 0
    assert svg_is_well_formed(result.stdout)
