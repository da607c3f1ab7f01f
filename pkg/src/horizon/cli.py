from __future__ import annotations

import multiprocessing
import platform
from pathlib import Path
from typing import TYPE_CHECKING, Any

import rich_click as click
import yaml
from click import Path as ClickPath
from pydantic import Field, NonNegativeFloat, PositiveFloat, ValidationError
from rich import get_console
from rich.console import Console
from rich.table import Table

from horizon import utils
from horizon.domain.overlaps.schemas import DetectorMode, ScenarioInputs
from horizon.domain.overlaps.services import compute_overlaps, dump_spectra
from horizon.domain.plots.services import bounds_chart, fidelity_chart, unruh_chart, write_svg
from horizon.domain.quadrature.schemas import QuadratureConfig
from horizon.domain.sweep.schemas import SweepConfig, SweepRecord
from horizon.domain.sweep.services import (
    check_failures,
    find_fidelity_minimum,
    read_records,
    run_sweep,
    write_curve_csv,
    write_records,
)
from horizon.domain.validation.services import run_validation
from horizon.lib import log, settings
from horizon.lib.cache import SpectrumCache
from horizon.lib.exceptions import (
    ApplicationError,
    ConfigurationError,
    ConvergenceError,
    ExitCode,
    OracleMismatchError,
)
from horizon.lib.schema import StrictModel
from horizon.lib.serialization import to_json

if TYPE_CHECKING:
    from collections.abc import Sequence

__all__ = ["OverlapsConfig", "RunConfig", "app", "load_run_config"]


click.rich_click.USE_RICH_MARKUP = True
click.rich_click.SHOW_ARGUMENTS = True
click.rich_click.GROUP_ARGUMENTS_OPTIONS = True
click.rich_click.STYLE_ERRORS_SUGGESTION = "magenta italic"
click.rich_click.ERRORS_SUGGESTION = "Try running the '--help' flag for more information."
click.rich_click.ERRORS_EPILOGUE = ""
click.rich_click.MAX_WIDTH = 80
click.rich_click.SHOW_METAVARS_COLUMN = False
click.rich_click.APPEND_METAVARS_HELP = True
console = get_console()
"""Pre-configured CLI Console."""
err_console = Console(stderr=True)
"""Diagnostics go to stderr so that stdout stays machine readable."""

logger = log.get_logger()

CURVE_FILE = "curve.csv"
SWEEP_FILE = "sweep.jsonl"
SWEEP_CSV_FILE = "sweep.csv"
OVERLAPS_FILE = "overlaps.json"
VALIDATE_FILE = "validate.json"
SPECTRA_DIR = "spectra"


class OverlapsConfig(StrictModel):
    """Single acceleration of the `overlaps` command."""

    a: PositiveFloat = 1.0
    n_param: PositiveFloat = settings.scenario.N_PARAM
    cutoff: NonNegativeFloat = settings.scenario.CUTOFF
    envelope_widths: PositiveFloat = settings.scenario.ENVELOPE_WIDTHS
    quad_cfg: QuadratureConfig = Field(default_factory=lambda: QuadratureConfig(rel_tol=settings.scenario.REL_TOL))
    detector: DetectorMode = DetectorMode.TWO_SIDED

    def inputs(self) -> ScenarioInputs:
        return ScenarioInputs.for_acceleration(
            self.a,
            n_param=self.n_param,
            cutoff=self.cutoff,
            envelope_widths=self.envelope_widths,
            quad_cfg=self.quad_cfg,
            detector=self.detector,
        )


class RunConfig(StrictModel):
    """Contents of a `--config` file; every section is optional."""

    sweep: SweepConfig = Field(default_factory=SweepConfig)
    overlaps: OverlapsConfig = Field(default_factory=OverlapsConfig)
    out: Path | None = None
    jobs: int | None = None
    bounds: bool = False


def _error_path(loc: Sequence[Any]) -> str:
    return ".".join(str(part) for part in loc)


def load_run_config(path: Path | None) -> RunConfig:
    """Parse and validate a YAML run configuration.

    Raises:
        ConfigurationError: unreadable file, YAML syntax error (with line and
            column) or schema violation (with the dotted field path).
    """
    if path is None:
        return RunConfig()
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark is not None else str(path)
        raise ConfigurationError(f"{where}: {getattr(exc, 'problem', None) or exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"{path}: expected a mapping at the top level")
    try:
        return RunConfig.parse_obj(raw)
    except ValidationError as exc:
        problems = "; ".join(f"{_error_path(e['loc'])}: {e['msg']}" for e in exc.errors())
        raise ConfigurationError(f"{path}: {problems}") from exc


def _with_tolerance(cfg: QuadratureConfig, tol: float | None) -> QuadratureConfig:
    return cfg if tol is None else cfg.with_tolerances(rel_tol=tol)


class ApplicationGroup(click.RichGroup):
    """Maps `ApplicationError` and usage errors to the documented exit codes."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = ExitCode.CONFIG
            raise
        except ApplicationError as exc:
            if settings.app.DEBUG:
                raise
            err_console.print(f"[bold red]{type(exc).__name__}:[/] {exc}", highlight=False)
            ctx.exit(int(exc.exit_code))


@click.group(cls=ApplicationGroup, help="Horizon entanglement discrimination simulator")
@click.option("-v", "--verbose", help="Enable verbose logging.", is_flag=True, default=False, type=bool)
@click.option("-d", "--debug", help="Enable debugging.", is_flag=True, default=False, type=bool)
def app(verbose: bool, debug: bool) -> None:
    """CLI application entrypoint."""
    settings.app.DEBUG = debug or settings.app.DEBUG
    settings.log.LEVEL = 10 if verbose or settings.app.DEBUG else settings.log.LEVEL
    log.configure(log.default_processors)  # type: ignore[arg-type]
    log.configure_stdlib()
    if platform.system() == "Darwin":
        multiprocessing.set_start_method("fork", force=True)


config_option = click.option(
    "--config",
    "config_path",
    help="YAML run configuration.",
    type=ClickPath(exists=True, dir_okay=False, path_type=Path),  # type: ignore[type-var]
    default=None,
)
out_option = click.option(
    "--out",
    help="Output directory.",
    type=ClickPath(file_okay=False, path_type=Path),  # type: ignore[type-var]
    default=None,
)
tol_option = click.option(
    "--tol",
    help="Relative tolerance of the overlap integrals.",
    type=click.FloatRange(min=0.0, min_open=True, max=1e-2),
    default=None,
)
jobs_option = click.option(
    "--jobs",
    help="Worker processes; 0 for one per core.",
    type=click.IntRange(min=0),
    default=None,
)


@app.command(name="validate", help="Run the internal validation suites.")
@out_option
@click.option(
    "--draws",
    help="Random coefficient draws per squeezing value.",
    type=click.IntRange(min=1),
    default=settings.oracle.DRAWS,
    show_default=True,
)
@click.option(
    "--cutoff",
    help="Minimum photon number cutoff of the Fock oracle.",
    type=click.IntRange(min=1, max=settings.oracle.MAX_CUTOFF),
    default=settings.oracle.CUTOFF,
    show_default=True,
)
def validate(out: Path | None, draws: int, cutoff: int) -> None:
    """Run every validation check and report the resolved cross-block sign."""
    report = run_validation(draws=draws, cutoff=cutoff)
    table = Table(title="Validation")
    table.add_column("check")
    table.add_column("max error", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("status")
    for check in report.checks:
        table.add_row(
            check.name,
            f"{check.max_error:.3e}",
            f"{check.tolerance:.0e}",
            "[green]pass[/]" if check.passed else "[red]FAIL[/]",
        )
    console.print(table)
    sign = "unresolved" if report.cross_sign is None else f"{report.cross_sign:+d}"
    console.print(
        f"cross-block sign: {sign} (configured {settings.gaussian.CROSS_BLOCK_SIGN:+d}, "
        f"amplitude sign {report.amplitude_sign:+d})",
    )
    if report.positive_amplitude_sign is not None:
        console.print(f"cross-block sign for positive tanh^n amplitudes: {report.positive_amplitude_sign:+d}")
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / VALIDATE_FILE).write_bytes(to_json(report))
    if not report.passed:
        raise OracleMismatchError(f"validation failed: {', '.join(report.failed)}")


@app.command(name="overlaps", help="Compute the overlaps at a single acceleration.")
@config_option
@out_option
@tol_option
@click.option("--a", "a", help="Dimensionless acceleration aL/c².", type=click.FloatRange(min=0.0, min_open=True), default=None)
@click.option("--n-param", help="Packet central frequency N.", type=click.FloatRange(min=0.0, min_open=True), default=None)
@click.option("--cutoff", help="Infrared cutoff Λ.", type=click.FloatRange(min=0.0), default=None)
@click.option(
    "--detector",
    help="Momenta of Rob's detection packet.",
    type=click.Choice([m.value for m in DetectorMode]),
    default=None,
)
@click.option("--dump-spectra", "write_spectra", help="Write the four Rindler spectra as CSV.", is_flag=True, default=False)
def overlaps(
    config_path: Path | None,
    out: Path | None,
    tol: float | None,
    a: float | None,
    n_param: float | None,
    cutoff: float | None,
    detector: str | None,
    write_spectra: bool,
) -> None:
    """Print the overlap set as JSON."""
    run = load_run_config(config_path)
    flags = {"a": a, "n_param": n_param, "cutoff": cutoff, "detector": detector}
    cfg = run.overlaps.copy(update={k: v for k, v in flags.items() if v is not None})
    cfg = cfg.copy(update={"quad_cfg": _with_tolerance(cfg.quad_cfg, tol)})
    out = out or run.out
    cache: SpectrumCache = SpectrumCache()
    ov = compute_overlaps(cfg.inputs(), cache)
    payload = to_json(ov)
    click.echo(payload.decode())
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / OVERLAPS_FILE).write_bytes(payload + b"\n")
    if write_spectra:
        paths = dump_spectra(cache, (out or Path()) / SPECTRA_DIR)
        logger.info("Wrote spectra", files=[str(p) for p in paths])
    if not ov.converged:
        failed = sorted(name for name, ok in ov.convergence.items() if not ok)
        raise ConvergenceError(f"overlaps did not converge: {', '.join(failed)}")


def _sweep_config(run: RunConfig, tol: float | None, **flags: Any) -> SweepConfig:
    update = {k: v for k, v in flags.items() if v is not None}
    if tol is not None:
        update["quad_cfg"] = _with_tolerance(run.sweep.quad_cfg, tol)
    try:
        return SweepConfig.parse_obj({**run.sweep.dict(), **update})
    except ValidationError as exc:
        problems = "; ".join(f"{_error_path(e['loc'])}: {e['msg']}" for e in exc.errors())
        raise ConfigurationError(problems) from exc


def _print_minima(records: list[SweepRecord], cfg: SweepConfig) -> None:
    table = Table(title="Fidelity minima")
    for column in ("s", "a*", "F_min", "F+ at a*"):
        table.add_column(column, justify="right")
    for s in cfg.s_values:
        try:
            minimum = find_fidelity_minimum(records, s, cfg if cfg.refine_minimum else None)
        except ApplicationError as exc:
            logger.warning("No fidelity minimum", s=s, reason=str(exc))
            table.add_row(f"{s:g}", "-", "-", "-")
            continue
        table.add_row(f"{s:g}", f"{minimum.a_star:.4g}", f"{minimum.f_min:.6f}", f"{minimum.f_plus_min:.6f}")
    console.print(table)


def _write_charts(records: list[SweepRecord], cfg: SweepConfig, out: Path, bounds: bool) -> None:
    write_svg(fidelity_chart(records), out / "fidelity.svg")
    write_svg(unruh_chart(records), out / "unruh.svg")
    if bounds:
        for s in cfg.s_values:
            write_svg(bounds_chart(records, s), out / f"bounds_s{s:g}.svg")


@app.command(name="curve", help="Fidelity and bounds against acceleration, as CSV and SVG.")
@config_option
@out_option
@tol_option
@jobs_option
@click.option("-s", "--squeezing", "s_values", help="Squeezing value; repeatable.", type=click.FloatRange(min=0.0), multiple=True)
@click.option("--a-min", help="Smallest acceleration.", type=click.FloatRange(min=0.0, min_open=True), default=None)
@click.option("--a-max", help="Largest acceleration.", type=click.FloatRange(min=0.0, min_open=True), default=None)
@click.option("--points", help="Log-spaced grid points.", type=click.IntRange(min=1), default=None)
@click.option("--bounds", help="Also plot the error probability bounds.", is_flag=True, default=False)
@click.option(
    "--refine/--no-refine",
    help="Refine each fidelity minimum by golden section (on unless the config says otherwise).",
    default=None,
)
def curve(
    config_path: Path | None,
    out: Path | None,
    tol: float | None,
    jobs: int | None,
    s_values: tuple[float, ...],
    a_min: float | None,
    a_max: float | None,
    points: int | None,
    bounds: bool,
    refine: bool | None,
) -> None:
    """Sweep the grid and write `curve.csv`, `fidelity.svg`, `unruh.svg`."""
    run = load_run_config(config_path)
    grid = None
    if a_min is not None or a_max is not None or points is not None:
        grid = utils.geometric_grid(
            a_min or settings.sweep.A_MIN,
            a_max or settings.sweep.A_MAX,
            points or settings.sweep.POINTS,
        )
    cfg = _sweep_config(
        run,
        tol,
        a_grid=grid,
        s_values=list(s_values) or None,
        refine_minimum=refine,
    )
    out = out or run.out or Path()
    records = run_sweep(cfg, jobs=jobs if jobs is not None else run.jobs, strict=False)
    write_curve_csv(records, out / CURVE_FILE)
    _write_charts(records, cfg, out, bounds or run.bounds)
    _print_minima(records, cfg)
    check_failures(records)


def _grid_order(records: list[SweepRecord], cfg: SweepConfig) -> list[SweepRecord]:
    order = {key: i for i, key in enumerate(cfg.keys())}
    return sorted(records, key=lambda r: order.get(r.key, len(order)))


@app.command(name="sweep", help="Resumable sweep persisted as JSON lines.")
@click.option(
    "--config",
    "config_path",
    help="YAML run configuration.",
    type=ClickPath(exists=True, dir_okay=False, path_type=Path),  # type: ignore[type-var]
    required=True,
)
@out_option
@tol_option
@jobs_option
@click.option("--retry-failed", help="Recompute points that failed in a previous run.", is_flag=True, default=False)
def sweep(config_path: Path, out: Path | None, tol: float | None, jobs: int | None, retry_failed: bool) -> None:
    """Evaluate every grid point not already present in `sweep.jsonl`.

    New records are appended in grid order; `--retry-failed` rewrites the
    file without the failed records it recomputes.
    """
    run = load_run_config(config_path)
    cfg = _sweep_config(run, tol)
    out = out or run.out or Path()
    path = out / SWEEP_FILE
    stored = read_records(path) if path.exists() else []
    existing = [r for r in stored if r.converged] if retry_failed else stored
    grid = set(cfg.keys())
    done = {r.key for r in existing} & grid
    if grid <= done and path.exists() and not retry_failed:
        logger.info("Sweep already complete", path=str(path), points=len(done))
        check_failures([r for r in existing if r.key in grid])
        return
    new = run_sweep(cfg, jobs=jobs if jobs is not None else run.jobs, skip=done, strict=False)
    records = _grid_order(existing + new, cfg)
    if len(existing) < len(stored):
        write_records(records, path)
    else:
        write_records(new, path, append=True)
    write_curve_csv([r for r in records if r.key in grid], out / SWEEP_CSV_FILE)
    logger.info("Wrote sweep", path=str(path), new=len(new), total=len(records))
    check_failures([r for r in records if r.key in grid])
