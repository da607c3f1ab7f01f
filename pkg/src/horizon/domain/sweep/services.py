"""Sweeps over (a, s), the fidelity minimum and the Unruh power law.

Overlaps do not depend on s: one work unit is one acceleration, computed
once and combined with every squeezing value.
"""
from __future__ import annotations

import csv
import math
import time
from typing import TYPE_CHECKING

import numpy as np

from horizon import utils
from horizon.domain.gaussian.services import discriminate
from horizon.domain.overlaps.services import compute_overlaps
from horizon.lib import settings
from horizon.lib.cache import overlap_cache
from horizon.lib.exceptions import ApplicationError, ConvergenceError, MonotoneCurveError
from horizon.lib.log import get_logger
from horizon.lib.log import sweep as sweep_log
from horizon.lib.serialization import format_float, from_json, to_json_line
from horizon.lib.worker import map_ordered

from .schemas import FidelityMinimum, PowerLawFit, SweepConfig, SweepRecord

if TYPE_CHECKING:
    from collections.abc import Callable, Collection, Iterable
    from pathlib import Path

    from horizon.domain.gaussian.schemas import DiscriminationResult
    from horizon.domain.overlaps.schemas import OverlapSet

__all__ = [
    "CURVE_COLUMNS",
    "check_failures",
    "default_a_grid",
    "fidelity_curve",
    "find_fidelity_minimum",
    "overlaps_for",
    "read_records",
    "run_sweep",
    "unruh_asymptotics",
    "write_curve_csv",
    "write_records",
]

logger = get_logger()

CURVE_COLUMNS = (
    "a",
    "s",
    "F",
    "F_minus",
    "F_plus",
    "n_unruh",
    "alpha",
    "beta",
    "det_sigma",
    "det_sigma_s",
    "converged",
)
_MIN_CURVE_POINTS = 5
_MIN_FIT_POINTS = 3
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def default_a_grid() -> list[float]:
    """SWEEP_POINTS log-spaced accelerations on [SWEEP_A_MIN, SWEEP_A_MAX]."""
    return utils.geometric_grid(settings.sweep.A_MIN, settings.sweep.A_MAX, settings.sweep.POINTS)


def overlaps_for(cfg: SweepConfig, a: float) -> OverlapSet:
    """Memoized overlaps of one acceleration of the sweep."""
    inputs = cfg.inputs(a)
    return overlap_cache.get_or_compute(inputs.cache_key, lambda: compute_overlaps(inputs))


def _run_acceleration(unit: tuple[SweepConfig, float, tuple[float, ...]]) -> list[SweepRecord]:
    cfg, a, s_values = unit
    start = time.perf_counter()
    try:
        ov: OverlapSet | None = overlaps_for(cfg, a)
        failure: str | None = None
    except ApplicationError as exc:
        ov, failure = None, f"{type(exc).__name__}: {exc}"
    share = (time.perf_counter() - start) / len(s_values)

    records = []
    for s in s_values:
        sweep_log.before_point()
        t0 = time.perf_counter()
        record = SweepRecord(a=a, s=s, overlaps=ov, error=failure)
        if ov is not None:
            try:
                sigma, sigma_s, result = discriminate(ov, s)
            except ApplicationError as exc:
                record.error = f"{type(exc).__name__}: {exc}"
            else:
                record.sigma, record.sigma_s, record.result = sigma, sigma_s, result
                record.converged = ov.converged
        record.wall_time = share + time.perf_counter() - t0
        sweep_log.after_point(record)
        records.append(record)
    return records


def run_sweep(
    cfg: SweepConfig,
    jobs: int | None = None,
    skip: Collection[tuple[float, float]] = (),
    strict: bool = True,
) -> list[SweepRecord]:
    """Evaluate every (a, s) of the grid not listed in `skip`.

    Failed points are recorded and the sweep continues. Records come back
    in grid order whatever the number of jobs.

    Args:
        cfg: The sweep.
        jobs: Worker processes, see `horizon.lib.worker.resolve_jobs`.
        skip: Keys already computed, e.g. found in a previous output file.
        strict: Raise when too many points fail, see `check_failures`.

    Raises:
        ConvergenceError: more than SWEEP_FAILURE_FRACTION of the points failed.
    """
    done = set(skip)
    units = []
    for a in cfg.a_grid:
        todo = tuple(s for s in cfg.s_values if (a, s) not in done)
        if todo:
            units.append((cfg, a, todo))
    logger.info("Starting sweep", accelerations=len(units), points=sum(len(u[2]) for u in units), skipped=len(done))
    records = [record for batch in map_ordered(_run_acceleration, units, jobs) for record in batch]
    if strict:
        check_failures(records)
    return records


def check_failures(records: Iterable[SweepRecord]) -> None:
    """Reject a sweep with more than SWEEP_FAILURE_FRACTION failed points.

    Raises:
        ConvergenceError: too many failures.
    """
    records = list(records)
    failed = sum(1 for r in records if not r.converged)
    if records and failed > settings.sweep.FAILURE_FRACTION * len(records):
        raise ConvergenceError(f"{failed} of {len(records)} sweep points failed")


def fidelity_curve(records: Iterable[SweepRecord], s: float) -> list[SweepRecord]:
    """Converged records of one squeezing value, ascending in a."""
    return sorted((r for r in records if r.s == s and r.ok), key=lambda r: r.a)


def _golden_section(
    evaluate: Callable[[float], DiscriminationResult],
    lo: float,
    hi: float,
    budget: int,
    evaluated: list[tuple[float, DiscriminationResult]],
) -> tuple[float, float]:
    """Golden section on log a; appends every evaluation to `evaluated` and returns the final bracket."""
    x_lo, x_hi = math.log(lo), math.log(hi)
    x1 = x_hi - _GOLDEN * (x_hi - x_lo)
    x2 = x_lo + _GOLDEN * (x_hi - x_lo)

    def run(x: float) -> float:
        result = evaluate(math.exp(x))
        evaluated.append((math.exp(x), result))
        return result.fidelity

    f1, f2 = run(x1), run(x2)
    while len(evaluated) < budget:
        if math.exp(x_hi) - math.exp(x_lo) <= settings.sweep.GOLDEN_REL_WIDTH * math.exp(0.5 * (x_lo + x_hi)):
            break
        if f1 <= f2:
            x_hi, x2, f2 = x2, x1, f1
            x1 = x_hi - _GOLDEN * (x_hi - x_lo)
            f1 = run(x1)
        else:
            x_lo, x1, f1 = x1, x2, f2
            x2 = x_lo + _GOLDEN * (x_hi - x_lo)
            f2 = run(x2)
    return math.exp(x_lo), math.exp(x_hi)


def find_fidelity_minimum(
    records: Iterable[SweepRecord],
    s: float,
    cfg: SweepConfig | None = None,
    evaluate: Callable[[float], DiscriminationResult] | None = None,
) -> FidelityMinimum:
    """Locate the interior fidelity minimum of one squeezing value.

    The grid minimum is refined by golden section over its neighbours when
    `cfg` or `evaluate` is given; each evaluation is a full pipeline run, at most
    SWEEP_GOLDEN_MAX_EVALUATIONS of them.

    Raises:
        ConvergenceError: fewer than five converged records.
        MonotoneCurveError: the grid minimum sits at an end of the curve.
    """
    curve = fidelity_curve(records, s)
    if len(curve) < _MIN_CURVE_POINTS:
        raise ConvergenceError(f"need {_MIN_CURVE_POINTS} converged points at s = {s}, have {len(curve)}")
    points = [(r.a, r.result) for r in curve if r.result is not None]
    i = int(np.argmin([result.fidelity for _, result in points]))
    if i in (0, len(points) - 1):
        raise MonotoneCurveError(f"fidelity at s = {s} has no interior minimum (lowest at a = {points[i][0]:g})")

    best_a, best = points[i]
    bracket = (points[i - 1][0], points[i + 1][0])
    if evaluate is None and cfg is not None:
        evaluate = _pipeline_evaluator(cfg, s)
    evaluated: list[tuple[float, DiscriminationResult]] = []
    if evaluate is not None:
        try:
            bracket = _golden_section(evaluate, *bracket, settings.sweep.GOLDEN_MAX_EVALUATIONS, evaluated)
        except ApplicationError as exc:
            logger.warning("Minimum refinement stopped", s=s, error=str(exc), evaluations=len(evaluated))
        for a, result in evaluated:
            if result.fidelity < best.fidelity:
                best_a, best = a, result
    return FidelityMinimum(
        s=s,
        a_star=best_a,
        f_min=best.fidelity,
        f_plus_min=best.f_plus,
        f_minus_min=best.f_minus,
        bracket=bracket,
        evaluations=len(evaluated),
        refined=bool(evaluated),
    )


def _pipeline_evaluator(cfg: SweepConfig, s: float) -> Callable[[float], DiscriminationResult]:
    def run(a: float) -> DiscriminationResult:
        ov = overlaps_for(cfg, a)
        return discriminate(ov, s)[2]

    return run


def _fit(points: list[tuple[float, float]], lo: float, hi: float) -> tuple[float, float, float, int] | None:
    window = [(a, n) for a, n in points if lo <= a <= hi]
    if len(window) < _MIN_FIT_POINTS:
        return None
    x = np.log10([a for a, _ in window])
    y = np.log10([n for _, n in window])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(residual**2))), len(window)


def unruh_asymptotics(
    records: Iterable[SweepRecord],
    cutoff: float | None = None,
    decades: float | None = None,
    shift: float | None = None,
) -> PowerLawFit:
    """Power-law exponent of ⟨n̂⟩_U over the top decade of accelerations.

    Only accelerations with k_c = a/2π above the cutoff enter; below it the
    count is exponentially small, not a power law.

    Raises:
        ConvergenceError: less than `decades` of converged data above 2πΛ.
    """
    cutoff = settings.scenario.CUTOFF if cutoff is None else cutoff
    decades = settings.sweep.FIT_DECADES if decades is None else decades
    shift = settings.sweep.FIT_SHIFT_DECADES if shift is None else shift
    threshold = 2.0 * math.pi * cutoff

    by_a: dict[float, float] = {}
    for r in records:
        if r.overlaps is not None and r.overlaps.converged and r.overlaps.n_unruh > 0 and r.a > threshold:
            by_a.setdefault(r.a, r.overlaps.n_unruh)
    points = sorted(by_a.items())
    if not points or math.log10(points[-1][0] / max(points[0][0], threshold)) < decades - 1e-12:
        raise ConvergenceError(f"need {decades} decade(s) of converged accelerations above a = {threshold:.4g}")

    top = points[-1][0]
    lo = top / 10.0**decades
    fit = _fit(points, lo, top)
    if fit is None:
        raise ConvergenceError(f"fewer than {_MIN_FIT_POINTS} points in the fit window [{lo:.4g}, {top:.4g}]")
    slope, intercept, rms, count = fit
    shifted = _fit(points, lo / 10.0**shift, top / 10.0**shift) if lo / 10.0**shift >= threshold else None
    return PowerLawFit(
        exponent=slope,
        log10_prefactor=intercept,
        window=(lo, top),
        points=count,
        residual_rms=rms,
        shifted_exponent=None if shifted is None else shifted[0],
    )


def _curve_row(record: SweepRecord) -> list[str]:
    ov, result = record.overlaps, record.result
    return [
        format_float(record.a),
        format_float(record.s),
        format_float(result.fidelity if result else None),
        format_float(result.f_minus if result else None),
        format_float(result.f_plus if result else None),
        format_float(ov.n_unruh if ov else None),
        format_float(ov.alpha.re if ov else None),
        format_float(ov.beta.re if ov else None),
        format_float(record.sigma.determinant if record.sigma else None),
        format_float(record.sigma_s.determinant if record.sigma_s else None),
        str(record.converged).lower(),
    ]


def write_curve_csv(records: Iterable[SweepRecord], path: Path) -> Path:
    """Write the curve table; failed points keep their row with empty cells."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CURVE_COLUMNS)
        writer.writerows(_curve_row(r) for r in records)
    return path


def write_records(records: Iterable[SweepRecord], path: Path, append: bool = False) -> Path:
    """Write records as JSON lines."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("ab" if append else "wb") as fh:
        for record in records:
            fh.write(to_json_line(record))
    return path


def read_records(path: Path) -> list[SweepRecord]:
    """Parse a JSON-lines sweep file; blank lines are ignored."""
    with path.open("rb") as fh:
        return [SweepRecord.parse_obj(from_json(line)) for line in fh if line.strip()]
