import csv
from pathlib import Path
from typing import Any

import pytest
from click.testing import CliRunner

from horizon.cli import app as cli_app
from horizon.cli import load_run_config
from horizon.domain.overlaps.schemas import OverlapSet
from horizon.domain.sweep.services import find_fidelity_minimum, read_records
from horizon.lib import settings
from horizon.lib.cache import overlap_cache
from horizon.lib.exceptions import ConfigurationError
from horizon.lib.serialization import from_json


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def test_help(cli_runner: CliRunner) -> None:
    result = cli_runner.invoke(cli_app, ["--help"])
    assert result.exit_code == 0
    for command in ("validate", "overlaps", "curve", "sweep"):
        assert command in result.output


def test_validate(cli_runner: CliRunner, tmp_path: Path) -> None:
    result = cli_runner.invoke(cli_app, ["validate", "--draws", "1", "--out", str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert "cross-block sign: +1" in result.output
    assert "positive tanh^n amplitudes: -1" in result.output
    report = from_json((tmp_path / "validate.json").read_bytes())
    assert report["cross_sign"] == 1
    assert report["amplitude_sign"] == -1
    assert len(report["checks"]) == 8


def test_validate_flags_misconfigured_sign(cli_runner: CliRunner, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(settings.gaussian, "CROSS_BLOCK_SIGN", -1)
    result = cli_runner.invoke(cli_app, ["validate", "--draws", "1"])
    assert result.exit_code == 3


def test_overlaps(cli_runner: CliRunner, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    seen: dict[str, Any] = {}

    def fake(inputs, cache=None):  # type: ignore[no-untyped-def]
        seen["inputs"] = inputs
        return OverlapSet.inertial_limit()

    monkeypatch.setattr("horizon.cli.compute_overlaps", fake)
    result = cli_runner.invoke(
        cli_app,
        ["overlaps", "--a", "0.5", "--tol", "1e-6", "--detector", "matched", "--out", str(tmp_path), "--dump-spectra"],
    )
    assert result.exit_code == 0, result.output
    assert seen["inputs"].a == 0.5
    assert seen["inputs"].quad_cfg.rel_tol == 1e-6
    assert seen["inputs"].detector == "matched"
    payload = from_json((tmp_path / "overlaps.json").read_bytes())
    assert payload["beta"] == {"re": 1.0, "im": 0.0}
    assert sorted(p.name for p in (tmp_path / "spectra").iterdir()) == [
        "spectrum_A.csv",
        "spectrum_A_conj.csv",
        "spectrum_B.csv",
        "spectrum_B_conj.csv",
    ]


def test_overlaps_unconverged_exit_code(cli_runner: CliRunner, monkeypatch: pytest.MonkeyPatch, make_overlaps) -> None:  # type: ignore[no-untyped-def]
    monkeypatch.setattr("horizon.cli.compute_overlaps", lambda inputs, cache=None: make_overlaps(1.0, converged=False))
    result = cli_runner.invoke(cli_app, ["overlaps"])
    assert result.exit_code == 2


def test_overlaps_out_of_range_acceleration(cli_runner: CliRunner) -> None:
    result = cli_runner.invoke(cli_app, ["overlaps", "--a", "5000"])
    assert result.exit_code == 1


def test_usage_errors_exit_with_config_code(cli_runner: CliRunner) -> None:
    result = cli_runner.invoke(cli_app, ["overlaps", "--tol", "0.5"])
    assert result.exit_code == 1
    result = cli_runner.invoke(cli_app, ["sweep"])
    assert result.exit_code == 1


def test_bad_config_files(cli_runner: CliRunner, tmp_path: Path) -> None:
    broken = _write(tmp_path / "broken.yaml", "sweep:\n  s_values: [1.0\n")
    result = cli_runner.invoke(cli_app, ["curve", "--config", str(broken)])
    assert result.exit_code == 1

    with pytest.raises(ConfigurationError, match="broken.yaml:"):
        load_run_config(broken)
    with pytest.raises(ConfigurationError, match="sweep.a_grid"):
        load_run_config(_write(tmp_path / "unsorted.yaml", "sweep:\n  a_grid: [2.0, 1.0]\n"))
    with pytest.raises(ConfigurationError, match="extra fields"):
        load_run_config(_write(tmp_path / "extra.yaml", "sweeps: {}\n"))
    with pytest.raises(ConfigurationError, match="mapping"):
        load_run_config(_write(tmp_path / "list.yaml", "- 1\n- 2\n"))
    assert load_run_config(_write(tmp_path / "empty.yaml", "")).jobs is None


@pytest.mark.usefixtures("fake_overlaps")
def test_curve(cli_runner: CliRunner, tmp_path: Path) -> None:
    result = cli_runner.invoke(
        cli_app,
        [
            "curve",
            "--out",
            str(tmp_path),
            "--jobs",
            "1",
            "-s",
            "1.0",
            "-s",
            "2.0",
            "--a-min",
            "0.01",
            "--a-max",
            "100",
            "--points",
            "21",
            "--bounds",
        ],
    )
    assert result.exit_code == 0, result.output
    rows = list(csv.reader((tmp_path / "curve.csv").open()))
    assert len(rows) == 1 + 21 * 2
    for name in ("fidelity.svg", "unruh.svg", "bounds_s1.svg", "bounds_s2.svg"):
        assert (tmp_path / name).read_text().startswith("<?xml")
    assert "Fidelity minima" in result.output


@pytest.mark.usefixtures("fake_overlaps")
def test_sweep_resumes(cli_runner: CliRunner, tmp_path: Path) -> None:
    config = _write(
        tmp_path / "run.yaml",
        f"out: {tmp_path / 'out'}\njobs: 1\nsweep:\n  a_grid: [0.5, 1.0, 2.0]\n  s_values: [1.0]\n",
    )
    result = cli_runner.invoke(cli_app, ["sweep", "--config", str(config)])
    assert result.exit_code == 0, result.output
    path = tmp_path / "out" / "sweep.jsonl"
    first = path.read_bytes()
    assert len(read_records(path)) == 3
    assert (tmp_path / "out" / "sweep.csv").exists()

    result = cli_runner.invoke(cli_app, ["sweep", "--config", str(config)])
    assert result.exit_code == 0, result.output
    assert path.read_bytes() == first

    _write(config, config.read_text().replace("[0.5, 1.0, 2.0]", "[0.5, 1.0, 2.0, 4.0]"))
    result = cli_runner.invoke(cli_app, ["sweep", "--config", str(config)])
    assert result.exit_code == 0, result.output
    records = read_records(path)
    assert [r.a for r in records] == [0.5, 1.0, 2.0, 4.0]
    assert path.read_bytes().startswith(first)


@pytest.mark.usefixtures("fake_overlaps")
@pytest.mark.parametrize(("flags", "refined"), [([], True), (["--no-refine"], False), (["--refine"], True)])
def test_curve_refines_minima_by_default(
    cli_runner: CliRunner,
    monkeypatch: pytest.MonkeyPatch,
    tmp_path: Path,
    flags: list[str],
    refined: bool,
) -> None:
    seen: list[bool] = []

    def spy(records, s, cfg=None, evaluate=None):  # type: ignore[no-untyped-def]
        seen.append(cfg is not None)
        return find_fidelity_minimum(records, s, cfg, evaluate)

    monkeypatch.setattr("horizon.cli.find_fidelity_minimum", spy)
    args = ["curve", "--out", str(tmp_path), "--jobs", "1", "-s", "1.0", "--a-min", "0.01", "--a-max", "100", "--points", "11"]
    result = cli_runner.invoke(cli_app, [*args, *flags])
    assert result.exit_code == 0, result.output
    assert seen == [refined]


@pytest.mark.usefixtures("fake_overlaps")
def test_sweep_appends_new_points(cli_runner: CliRunner, tmp_path: Path) -> None:
    config = _write(
        tmp_path / "run.yaml",
        f"out: {tmp_path}\njobs: 1\nsweep:\n  a_grid: [0.5, 2.0]\n  s_values: [1.0]\n",
    )
    assert cli_runner.invoke(cli_app, ["sweep", "--config", str(config)]).exit_code == 0
    path = tmp_path / "sweep.jsonl"
    first = path.read_bytes()

    _write(config, config.read_text().replace("[0.5, 2.0]", "[0.5, 1.0, 2.0]"))
    result = cli_runner.invoke(cli_app, ["sweep", "--config", str(config)])
    assert result.exit_code == 0, result.output
    assert path.read_bytes().startswith(first)
    assert [r.a for r in read_records(path)] == [0.5, 2.0, 1.0]
    rows = list(csv.reader((tmp_path / "sweep.csv").open()))
    assert [float(row[0]) for row in rows[1:]] == [0.5, 1.0, 2.0]


@pytest.mark.usefixtures("fake_overlaps")
def test_sweep_retry_rewrites_failed_points(
    cli_runner: CliRunner,
    monkeypatch: pytest.MonkeyPatch,
    make_overlaps,  # type: ignore[no-untyped-def]
    tmp_path: Path,
) -> None:
    config = _write(
        tmp_path / "run.yaml",
        f"out: {tmp_path}\njobs: 1\nsweep:\n  a_grid: [0.5, 1.0, 2.0]\n  s_values: [1.0]\n",
    )

    def flaky(inputs, cache=None):  # type: ignore[no-untyped-def]
        return make_overlaps(inputs.a, converged=inputs.a != 1.0)

    monkeypatch.setattr("horizon.domain.sweep.services.compute_overlaps", flaky)
    cli_runner.invoke(cli_app, ["sweep", "--config", str(config)])
    path = tmp_path / "sweep.jsonl"
    assert [r.converged for r in read_records(path)] == [True, False, True]

    overlap_cache.clear()
    monkeypatch.setattr("horizon.domain.sweep.services.compute_overlaps", lambda inputs, cache=None: make_overlaps(inputs.a))
    result = cli_runner.invoke(cli_app, ["sweep", "--config", str(config), "--retry-failed"])
    assert result.exit_code == 0, result.output
    records = read_records(path)
    assert [r.a for r in records] == [0.5, 1.0, 2.0]
    assert all(r.converged for r in records)
