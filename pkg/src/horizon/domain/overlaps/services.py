"""Rindler spectra and the scenario overlaps.

A packet's Rindler spectrum is the inner l-integral

    S(k) = N_pkt ∫ dl (u_l, φ) (w_Ik, u_l)

over the packet's half-line. With `m = |l|` and the prefactor `P(k)` split
off the Bogoliubov coefficient it reads

    S(k) = 2 d N_pkt P(k) ∫ G(m) e^{i((k/a) ln m + ω m)} dm,

`d = ±1` the packet direction, `G` the real envelope over √m and
`ω = ∓ d x₀` from the translation phase (upper sign for S, lower for the
conjugate spectrum). The overlaps are outer k-integrals of products of
spectra, extended over doubling windows until the last window stops
contributing.
"""
from __future__ import annotations

import csv
import math
from functools import lru_cache
from typing import TYPE_CHECKING, Final

import numpy as np

from horizon.domain.modes.schemas import Acceleration, WavePacketSpec
from horizon.domain.modes.services import bogoliubov_prefactor, packet_envelope
from horizon.domain.quadrature.schemas import QuadratureConfig, QuadratureResult
from horizon.domain.quadrature.services import integrate, integrate_log_oscillatory
from horizon.domain.specfun.services import occupation_weights
from horizon.lib import settings
from horizon.lib.cache import SpectrumCache
from horizon.lib.exceptions import DegenerateConfigurationError, DomainError
from horizon.lib.log import get_logger
from horizon.lib.schema import ComplexValue
from horizon.lib.serialization import format_float

from .schemas import DetectorMode, OverlapSet, ScenarioInputs

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    import numpy.typing as npt

__all__ = [
    "SPECTRUM_LABELS",
    "check_acceleration",
    "compute_overlaps",
    "dump_spectra",
    "inner_config",
    "normalizations",
    "packet_normalization",
    "rindler_spectrum",
    "rindler_spectrum_A",
    "rindler_spectrum_A_conj",
    "rindler_spectrum_B",
    "rindler_spectrum_B_conj",
]

logger = get_logger()

SPECTRUM_LABELS: Final = {
    "spectrum_A": ("A", False),
    "spectrum_A_conj": ("A", True),
    "spectrum_B": ("B", False),
    "spectrum_B_conj": ("B", True),
}
"""Dump file stem -> (packet label, conjugate)."""

_VANISHING_NORM = 1e-300


def check_acceleration(a: float) -> None:
    """Refuse accelerations outside the supported window.

    Raises:
        DegenerateConfigurationError: a < MIN_ACCEL or a > MAX_ACCEL.
    """
    lo, hi = settings.scenario.MIN_ACCEL, settings.scenario.MAX_ACCEL
    if not lo <= a <= hi:
        raise DegenerateConfigurationError(
            f"acceleration a = {a:g} is outside the supported window [{lo:g}, {hi:g}]",
        )


def inner_config(quad_cfg: QuadratureConfig) -> QuadratureConfig:
    """Tolerances of the inner l-integrals for outer integrals at `quad_cfg`."""
    return quad_cfg.with_tolerances(
        rel_tol=quad_cfg.rel_tol * settings.scenario.INNER_TOL_FACTOR,
        max_evaluations=settings.quad.INNER_MAX_EVALUATIONS,
    )


def _support_window(n_param: float, cutoff: float, widths: float) -> tuple[float, float]:
    lo, hi = max(cutoff, n_param - widths), n_param + widths
    if not lo > 0:
        raise DegenerateConfigurationError(
            f"cutoff Λ = {cutoff:g} leaves the 1/|l| singularity inside the packet support",
        )
    if lo >= hi:
        raise DegenerateConfigurationError(
            f"cutoff Λ = {cutoff:g} lies above the packet support (N = {n_param:g})",
        )
    return lo, hi


@lru_cache(maxsize=256)
def _envelope_norm(n_param: float, cutoff: float, widths: float, cfg: QuadratureConfig) -> QuadratureResult:
    lo, hi = _support_window(n_param, cutoff, widths)
    result = integrate(lambda m: packet_envelope(m, n_param) ** 2, lo, hi, cfg)
    if result.value.re < _VANISHING_NORM:
        raise DegenerateConfigurationError(f"packet norm vanishes for N = {n_param:g}, Λ = {cutoff:g}")
    return result


@lru_cache(maxsize=256)
def _envelope_mass(n_param: float, cutoff: float, widths: float, cfg: QuadratureConfig) -> float:
    """∫ G(m) dm over the support; bounds the inner integral of any spectrum."""
    lo, hi = _support_window(n_param, cutoff, widths)
    return abs(integrate(lambda m: packet_envelope(m, n_param) / np.sqrt(m), lo, hi, cfg).value.re)


def packet_normalization(
    packet: WavePacketSpec,
    cfg: QuadratureConfig | None = None,
    widths: float = settings.scenario.ENVELOPE_WIDTHS,
) -> tuple[float, QuadratureResult]:
    """N_pkt = [∫ |(u_l, φ)|² dl]^{−1/2} over the packet's half-line beyond Λ.

    The translation phase drops out of |·|², so the result depends only on
    N and Λ.

    Returns:
        The normalization and the underlying integral.
    """
    cfg = cfg or QuadratureConfig()
    result = _envelope_norm(packet.n_param, packet.cutoff, widths, cfg)
    return result.value.re ** -0.5, result


def rindler_spectrum(
    k: float,
    packet: WavePacketSpec,
    accel: Acceleration | float,
    *,
    conjugate: bool = False,
    cfg: QuadratureConfig | None = None,
    norm: float | None = None,
    widths: float = settings.scenario.ENVELOPE_WIDTHS,
    floor: float = 0.0,
) -> QuadratureResult:
    """(w_Ik, φ) for any cutoff Gaussian packet, including its normalization.

    With `conjugate` the spectrum built from (u_l, φ)* and (w_Ik, u_l*).
    Momenta of the opposite sign to the packet's support give an exact
    zero.

    `floor` is an absolute accuracy on the spectrum itself. Where
    `|prefactor| ∫ G dm` is below it the spectrum is returned as zero with
    that bound as its error; otherwise the inner integral is resolved to
    `floor / |prefactor|`.

    Raises:
        DomainError: |k| < Λ.
    """
    a = float(accel)
    if abs(k) < packet.cutoff or k == 0:
        raise DomainError(f"Rindler momentum |k| = {abs(k):g} is below the cutoff Λ = {packet.cutoff:g}")
    if (k > 0) != (packet.sign > 0):
        return QuadratureResult(value=ComplexValue(re=0.0, im=0.0), error_estimate=0.0, evaluations=0, converged=True)
    if norm is None:
        norm, _ = packet_normalization(packet, cfg, widths)
    lo, hi = _support_window(packet.n_param, packet.cutoff, widths)
    n_param = packet.n_param
    omega = (1.0 if conjugate else -1.0) * packet.sign * packet.center

    def envelope(m: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return packet_envelope(m, n_param) / np.sqrt(m)

    cfg = cfg or QuadratureConfig()
    factor = 2.0 * packet.sign * norm * bogoliubov_prefactor(k, a, conjugate=conjugate)
    if floor > 0:
        bound = abs(factor) * _envelope_mass(n_param, packet.cutoff, widths, cfg)
        if bound <= floor:
            return QuadratureResult(
                value=ComplexValue(re=0.0, im=0.0),
                error_estimate=bound,
                evaluations=0,
                converged=True,
            )
        cfg = cfg.with_tolerances(abs_tol=max(cfg.abs_tol, floor / abs(factor)))
    inner = integrate_log_oscillatory(envelope, k / a, lo, hi, cfg, omega=omega)
    return inner.scaled(factor)


def _spectrum(
    k: float,
    inputs: ScenarioInputs,
    label: str,
    conjugate: bool,
    cache: SpectrumCache | None,
) -> QuadratureResult:
    packet = inputs.packet_A if label == "A" else inputs.packet_B
    cfg = inner_config(inputs.quad_cfg)

    def compute() -> QuadratureResult:
        norm, _ = packet_normalization(packet, inputs.quad_cfg, inputs.envelope_widths)
        return rindler_spectrum(
            k,
            packet,
            inputs.accel,
            conjugate=conjugate,
            cfg=cfg,
            norm=norm,
            widths=inputs.envelope_widths,
            floor=cfg.rel_tol * settings.scenario.SPECTRUM_SCALE,
        )

    if cache is None:
        return compute()
    return cache.get_or_compute((label, conjugate, float(k)), compute)


def rindler_spectrum_B(k: float, inputs: ScenarioInputs, cache: SpectrumCache | None = None) -> QuadratureResult:  # noqa: N802
    """(w_Ik, φ_B) for k >= Λ."""
    return _spectrum(k, inputs, "B", False, cache)


def rindler_spectrum_B_conj(k: float, inputs: ScenarioInputs, cache: SpectrumCache | None = None) -> QuadratureResult:  # noqa: N802
    """(w_Ik, φ_B*) for k >= Λ."""
    return _spectrum(k, inputs, "B", True, cache)


def rindler_spectrum_A(k: float, inputs: ScenarioInputs, cache: SpectrumCache | None = None) -> QuadratureResult:  # noqa: N802
    """(w_Ik, φ_A) for k <= −Λ."""
    return _spectrum(k, inputs, "A", False, cache)


def rindler_spectrum_A_conj(k: float, inputs: ScenarioInputs, cache: SpectrumCache | None = None) -> QuadratureResult:  # noqa: N802
    """(w_Ik, φ_A*) for k <= −Λ."""
    return _spectrum(k, inputs, "A", True, cache)


class _OuterIntegrals:
    """Outer k-integrals of one scenario sharing a spectrum cache."""

    def __init__(self, inputs: ScenarioInputs, cache: SpectrumCache) -> None:
        self.inputs = inputs
        self.cache = cache
        self.k_truncation = inputs.cutoff
        self.tails: dict[str, float] = {}

    def spectra(self, ks: npt.NDArray[np.float64], label: str, conjugate: bool) -> npt.NDArray[np.complex128]:
        return np.array(
            [_spectrum(float(k), self.inputs, label, conjugate, self.cache).complex_value for k in ks],
            dtype=np.complex128,
        )

    def integrand(self, name: str) -> Callable[[npt.NDArray[np.float64]], npt.NDArray[np.complex128]]:
        label, kind = name[-1], name[0]
        a = self.inputs.a

        def norm_squared(ks: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
            return np.abs(self.spectra(ks, label, False)).astype(np.complex128) ** 2

        def weighted(ks: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
            return occupation_weights(np.abs(ks) / a) * norm_squared(ks)

        def cross(ks: npt.NDArray[np.float64]) -> npt.NDArray[np.complex128]:
            return np.conj(self.spectra(ks, label, False)) * self.spectra(ks, label, True)

        return {"I": norm_squared, "U": weighted, "X": cross}[kind]

    def integrate(self, name: str, cfg: QuadratureConfig) -> QuadratureResult:
        """∫ over k >= Λ (packet B) or k <= −Λ (packet A) in doubling windows."""
        sign = -1.0 if name.endswith("A") else 1.0
        f = self.integrand(name)
        inputs = self.inputs
        floor = inputs.n_param + inputs.envelope_widths
        total = QuadratureResult(value=ComplexValue(re=0.0, im=0.0), error_estimate=0.0, evaluations=0, converged=True)
        lo = inputs.cutoff
        last = math.inf
        for _ in range(settings.scenario.K_WINDOW_LIMIT):
            threshold = settings.scenario.K_TAIL_FRACTION * max(cfg.rel_tol * abs(total.complex_value), cfg.abs_tol)
            window_cfg = cfg.with_tolerances(abs_tol=max(cfg.abs_tol, threshold))
            window = integrate(lambda x: f(sign * x), lo, 2.0 * lo, window_cfg)
            total = total + window
            lo *= 2.0
            last = abs(window.complex_value)
            if lo >= floor and last < threshold:
                break
        else:
            total = QuadratureResult(
                value=total.value,
                error_estimate=total.error_estimate + last,
                evaluations=total.evaluations,
                converged=False,
                diagnostic=f"k-range not exhausted after {settings.scenario.K_WINDOW_LIMIT} windows",
            )
        self.k_truncation = max(self.k_truncation, lo)
        self.tails[name] = last
        return total


def _integrals(inputs: ScenarioInputs, cache: SpectrumCache) -> tuple[_OuterIntegrals, dict[str, QuadratureResult]]:
    outer = _OuterIntegrals(inputs, cache)
    cfg = inputs.quad_cfg
    results = {"I_B": outer.integrate("I_B", cfg)}
    if DetectorMode(inputs.detector) is DetectorMode.TWO_SIDED:
        results["I_A"] = outer.integrate("I_A", cfg.with_tolerances(abs_tol=cfg.rel_tol * results["I_B"].value.re))
    return outer, results


def normalizations(inputs: ScenarioInputs, cache: SpectrumCache | None = None) -> tuple[float, float, float]:
    """(N_A, N_B, N_R).

    N_R = [∫_{k<=−Λ} |(w_Ik, φ_A)|² + ∫_{k>=Λ} |(w_Ik, φ_B)|²]^{−1/2}; in
    matched mode only Bob's side contributes.

    Raises:
        DegenerateConfigurationError: a vanishing norm or an unsupported acceleration.
    """
    check_acceleration(inputs.a)
    cache = cache if cache is not None else SpectrumCache()
    norm_a, _ = packet_normalization(inputs.packet_A, inputs.quad_cfg, inputs.envelope_widths)
    norm_b, _ = packet_normalization(inputs.packet_B, inputs.quad_cfg, inputs.envelope_widths)
    _, results = _integrals(inputs, cache)
    return norm_a, norm_b, _norm_r(results)


def _norm_r(results: dict[str, QuadratureResult]) -> float:
    total = sum(r.value.re for r in results.values())
    if not total > _VANISHING_NORM:
        raise DegenerateConfigurationError("Rob's packet has vanishing norm")
    return total**-0.5


def compute_overlaps(inputs: ScenarioInputs, cache: SpectrumCache | None = None) -> OverlapSet:
    """α, α′, β, β′ and ⟨n̂⟩_U for one acceleration.

    Unconverged integrals do not raise: the affected `convergence` flags
    are cleared and the caller decides whether to proceed.
    """
    check_acceleration(inputs.a)
    cache = cache if cache is not None else SpectrumCache()
    norm_a, pa = packet_normalization(inputs.packet_A, inputs.quad_cfg, inputs.envelope_widths)
    norm_b, pb = packet_normalization(inputs.packet_B, inputs.quad_cfg, inputs.envelope_widths)
    outer, results = _integrals(inputs, cache)
    norm_r = _norm_r(results)
    cfg = inputs.quad_cfg.with_tolerances(abs_tol=inputs.quad_cfg.rel_tol / norm_r**2)
    two_sided = DetectorMode(inputs.detector) is DetectorMode.TWO_SIDED
    sides = ("A", "B") if two_sided else ("B",)
    for side in sides:
        results[f"X_{side}"] = outer.integrate(f"X_{side}", cfg)
        results[f"U_{side}"] = outer.integrate(f"U_{side}", cfg)

    def overlap(name: str) -> ComplexValue:
        result = results.get(name)
        return ComplexValue.from_complex(0j if result is None else norm_r * result.complex_value)

    n_unruh = norm_r**2 * sum(results[f"U_{side}"].value.re for side in sides)
    convergence = {"norm_A": pa.converged, "norm_B": pb.converged}
    convergence.update({name: r.converged for name, r in results.items()})
    convergence["spectra"] = all(r.converged for _, r in cache.items())
    errors = {name: r.error_estimate for name, r in results.items()}
    errors.update({f"tail_{name}": tail for name, tail in outer.tails.items()})
    ov = OverlapSet(
        alpha=overlap("I_A"),
        alpha_prime=overlap("X_A"),
        beta=overlap("I_B"),
        beta_prime=overlap("X_B"),
        n_unruh=max(n_unruh, 0.0),
        norm_A=norm_a,
        norm_B=norm_b,
        norm_R=norm_r,
        k_truncation=outer.k_truncation,
        convergence=convergence,
        error_estimates=errors,
        accel=inputs.a,
        detector=inputs.detector,
    )
    logger.debug(
        "Computed overlaps",
        a=inputs.a,
        alpha=ov.alpha.re,
        beta=ov.beta.re,
        n_unruh=ov.n_unruh,
        spectra=len(cache),
        converged=ov.converged,
    )
    return ov


def dump_spectra(cache: SpectrumCache, directory: Path) -> list[Path]:
    """Write the four cached spectra as `k,Re,Im,error_estimate` CSVs.

    Returns:
        The written paths, one per spectrum even if it was never sampled.
    """
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for stem, (label, conjugate) in SPECTRUM_LABELS.items():
        path = directory / f"{stem}.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["k", "Re", "Im", "error_estimate"])
            for k, result in cache.samples(label, conjugate):
                writer.writerow(
                    [format_float(k), format_float(result.value.re), format_float(result.value.im), format_float(result.error_estimate)],
                )
        paths.append(path)
    return paths
