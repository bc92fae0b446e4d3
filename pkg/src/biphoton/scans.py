"""Parameter-scan engine for coincidence-probability curves.

A :class:`ScanSpec` names a source model, the swept parameter (``dz`` path
delay or ``dl`` half path difference), the sweep range and the evaluation
methods.  Each scan point is an independent pure evaluation: the spectrum is
rebuilt from scratch, sent through the balanced splitter for the numeric
probability, and compared against the model's closed form where one exists.
Identical specs therefore produce bit-identical tables, in any evaluation
order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import fileio
from .beamsplitter import BeamSplitterParams, coincidence_probability
from .errors import ConfigError
from .models import (
    GaussianPairModel,
    ShihModel,
    bell_antisymmetric_spectrum,
    delta_pump_spectrum,
    gaussian_pair_spectrum,
    hom_dip_closed,
    shih_exact,
    shih_norm_factor,
    shih_reduced,
    shih_spectrum,
)
from .spectrum import (
    BiphotonSpectrum,
    FrequencyGrid,
    apply_path_delays,
    make_grid,
    symmetry_decompose,
)

MODELS = ("gaussian_pair", "shih", "delta_pump", "bell", "spectrum_file")
SWEEPABLE = ("dz", "dl")
EVALUATIONS = ("numeric", "closed_form")

# Allowed fixed-parameter keys per model; unknown keys are rejected.
_MODEL_KEYS = {
    "gaussian_pair": {"center", "sigma", "pump_sigma", "c_light"},
    "shih": {"center", "sigma", "sigma_p", "delta_l", "z1", "z2", "dz", "c_light"},
    "delta_pump": {"center", "sigma", "dl", "parity", "c_light"},
    "bell": {"omega_a", "omega_b", "c_light"},
    "spectrum_file": {"path", "c_light"},
}

_CLOSED_FORM_MODELS = {"gaussian_pair", "shih"}


@dataclass(frozen=True)
class ScanSpec:
    """Declarative description of one scan.

    ``fixed`` holds the model parameters that do not vary along the sweep;
    allowed keys depend on the model (see ``_MODEL_KEYS``).  ``evaluation``
    defaults to numeric plus closed form when the model has one.
    ``delay_mode`` controls how a swept ``dz`` is applied to models without
    internal paths: ``"signal"`` delays port 1 only (relative delay ``dz``),
    ``"common"`` delays both ports equally (pure global phase for symmetric
    or antisymmetric states).
    """

    model: str
    swept: str
    start: float
    stop: float
    n_steps: int
    fixed: dict[str, Any] = field(default_factory=dict)
    evaluation: tuple[str, ...] | None = None
    grid_points: int = 257
    grid_span_sigmas: float = 6.0
    delay_mode: str = "signal"
    include_w_antisym: bool = True

    def __post_init__(self):
        validate_model_params(self.model, self.fixed)
        if self.swept not in SWEEPABLE:
            raise ConfigError(f"swept must be one of {SWEEPABLE}, got {self.swept!r}")
        if self.n_steps < 2:
            raise ConfigError("steps must be >= 2")
        if not (self.start < self.stop):
            raise ConfigError("scan range must satisfy start < stop")
        if self.delay_mode not in ("signal", "common"):
            raise ConfigError(f"delay_mode must be 'signal' or 'common', got {self.delay_mode!r}")
        if self.evaluation is not None:
            if not self.evaluation:
                raise ConfigError("at least one evaluation method must be selected")
            bad = set(self.evaluation) - set(EVALUATIONS)
            if bad:
                raise ConfigError(f"unknown evaluation method(s): {sorted(bad)}")
            if "closed_form" in self.evaluation and self.model not in _CLOSED_FORM_MODELS:
                raise ConfigError(f"model {self.model!r} has no closed-form evaluation")

    def resolved_evaluation(self) -> tuple[str, ...]:
        if self.evaluation is not None:
            return self.evaluation
        if self.model in _CLOSED_FORM_MODELS:
            return ("numeric", "closed_form")
        return ("numeric",)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.n_steps)


@dataclass(frozen=True)
class ScanRow:
    param: float
    p_numeric: float | None = None
    p_closed: float | None = None
    p_reduced: float | None = None
    w_antisym: float | None = None


@dataclass(frozen=True, eq=False)
class ScanResult:
    spec: ScanSpec
    rows: tuple[ScanRow, ...]
    metadata: dict[str, Any]


@dataclass(frozen=True)
class ScanComparison:
    """Deviation statistics between the numeric and closed-form columns."""

    max_abs_dev: float
    argmax_param: float
    rms: float


def _require(fixed: dict[str, Any], key: str, model: str) -> Any:
    if key not in fixed:
        raise ConfigError(f"model {model!r} requires parameter {key!r}")
    return fixed[key]


def validate_model_params(model: str, fixed: dict[str, Any]) -> None:
    """Reject unknown models and unknown fixed-parameter keys."""
    if model not in MODELS:
        raise ConfigError(f"unknown model {model!r}; expected one of {MODELS}")
    unknown = set(fixed) - _MODEL_KEYS[model]
    if unknown:
        raise ConfigError(f"unknown parameter(s) for model {model!r}: {sorted(unknown)}")


def _bell_grid(omega_a: float, omega_b: float, n_points: int, span_mult: float) -> FrequencyGrid:
    # Spacing chosen so both tones land exactly on grid cells.
    center = 0.5 * (omega_a + omega_b)
    half_gap = 0.5 * abs(omega_b - omega_a)
    if half_gap == 0.0:
        raise ConfigError("omega_a and omega_b must differ")
    cells = max(1, round((n_points - 1) / (2.0 * span_mult)))
    spacing = half_gap / cells
    return make_grid(center, spacing * (n_points - 1) / 2.0, n_points)


def resolve_grid(
    model: str, fixed: dict[str, Any], grid_points: int = 257, grid_span_sigmas: float = 6.0
) -> FrequencyGrid:
    """Frequency grid implied by a model's fixed parameters."""
    if model == "spectrum_file":
        return fileio.load_spectrum(_require(fixed, "path", model)).grid
    if model == "bell":
        return _bell_grid(
            _require(fixed, "omega_a", model),
            _require(fixed, "omega_b", model),
            grid_points,
            grid_span_sigmas,
        )
    sigma = float(fixed.get("sigma", 1.0))
    center = float(fixed.get("center", 0.0))
    return make_grid(center, grid_span_sigmas * sigma, grid_points)


def model_grid(spec: ScanSpec) -> FrequencyGrid:
    """Frequency grid implied by the spec's model parameters."""
    return resolve_grid(spec.model, spec.fixed, spec.grid_points, spec.grid_span_sigmas)


def _shih_model(spec: ScanSpec, value: float) -> ShihModel:
    fixed = spec.fixed
    z1 = float(fixed.get("z1", 0.0))
    if spec.swept == "dz":
        delta_l = float(fixed.get("delta_l", 0.0))
        dz = value
    else:
        delta_l = value
        dz = float(fixed.get("dz", 0.0))
    return ShihModel.from_path_difference(
        center=float(_require(fixed, "center", "shih")),
        sigma=float(fixed.get("sigma", 1.0)),
        sigma_p=float(_require(fixed, "sigma_p", "shih")),
        delta_l=delta_l,
        z1=z1,
        z2=z1 - dz,
        c_light=float(fixed.get("c_light", 1.0)),
    )


def _build_point_spectrum(
    spec: ScanSpec, grid: FrequencyGrid, base: BiphotonSpectrum | None, value: float
) -> tuple[BiphotonSpectrum, float]:
    """Spectrum and effective relative delay for one scan point."""
    fixed = spec.fixed
    c_light = float(fixed.get("c_light", 1.0))

    if spec.model == "shih":
        m = _shih_model(spec, value)
        return shih_spectrum(m, grid), m.z1 - m.z2

    if spec.swept == "dl":
        if spec.model != "delta_pump":
            raise ConfigError(f"model {spec.model!r} cannot sweep 'dl'")
        s = delta_pump_spectrum(
            sigma=float(fixed.get("sigma", 1.0)),
            center=float(fixed.get("center", 0.0)),
            dl=value,
            parity=str(fixed.get("parity", "even")),
            grid=grid,
            c_light=c_light,
        )
        return s, 0.0

    # dz sweep over an externally delayed model spectrum
    if base is None:
        base = _base_spectrum(spec, grid)
    if spec.delay_mode == "signal":
        z1, z2 = value, 0.0
    else:
        z1, z2 = value, value
    return apply_path_delays(base, z1, z2, c_light), z1 - z2


def build_model_spectrum(
    model: str, fixed: dict[str, Any], grid: FrequencyGrid
) -> BiphotonSpectrum:
    """Undelayed model spectrum for ``model`` with parameters ``fixed``.

    The ``shih`` model carries its paths internally (``delta_l``, ``z1``,
    ``z2`` or a relative ``dz``); the other models are built delay-free.
    """
    if model == "gaussian_pair":
        m = GaussianPairModel(
            center=float(fixed.get("center", 0.0)),
            sigma=float(fixed.get("sigma", 1.0)),
            pump_sigma=(None if fixed.get("pump_sigma") is None else float(fixed["pump_sigma"])),
        )
        return gaussian_pair_spectrum(m, grid)
    if model == "delta_pump":
        return delta_pump_spectrum(
            sigma=float(fixed.get("sigma", 1.0)),
            center=float(fixed.get("center", 0.0)),
            dl=float(fixed.get("dl", 0.0)),
            parity=str(fixed.get("parity", "even")),
            grid=grid,
            c_light=float(fixed.get("c_light", 1.0)),
        )
    if model == "bell":
        return bell_antisymmetric_spectrum(
            _require(fixed, "omega_a", "bell"), _require(fixed, "omega_b", "bell"), grid
        )
    if model == "shih":
        z1 = float(fixed.get("z1", 0.0))
        m = ShihModel.from_path_difference(
            center=float(_require(fixed, "center", "shih")),
            sigma=float(fixed.get("sigma", 1.0)),
            sigma_p=float(_require(fixed, "sigma_p", "shih")),
            delta_l=float(fixed.get("delta_l", 0.0)),
            z1=z1,
            z2=float(fixed.get("z2", z1 - float(fixed.get("dz", 0.0)))),
            c_light=float(fixed.get("c_light", 1.0)),
        )
        return shih_spectrum(m, grid)
    if model == "spectrum_file":
        return fileio.load_spectrum(_require(fixed, "path", "spectrum_file"))
    raise ConfigError(f"unknown model {model!r}")


def _base_spectrum(spec: ScanSpec, grid: FrequencyGrid) -> BiphotonSpectrum:
    return build_model_spectrum(spec.model, spec.fixed, grid)


def _evaluate_point(
    spec: ScanSpec, grid: FrequencyGrid, base: BiphotonSpectrum | None, value: float
) -> tuple[ScanRow, tuple[str, ...]]:
    evaluation = spec.resolved_evaluation()
    balanced = BeamSplitterParams.balanced()

    p_numeric = None
    w_antisym = None
    warnings: tuple[str, ...] = ()
    if "numeric" in evaluation:
        s, _ = _build_point_spectrum(spec, grid, base, value)
        warnings = s.warnings
        p_numeric = coincidence_probability(s, balanced)
        if spec.include_w_antisym:
            w_antisym = symmetry_decompose(s).w_antisym

    p_closed = None
    p_reduced = None
    if "closed_form" in evaluation:
        if spec.model == "shih":
            m = _shih_model(spec, value)
            dz = m.z1 - m.z2
            p_closed, p_reduced = shih_exact(m, dz), shih_reduced(m, dz)
        else:
            effective_dz = value if spec.delay_mode == "signal" else 0.0
            p_closed = hom_dip_closed(
                float(spec.fixed.get("sigma", 1.0)),
                effective_dz,
                float(spec.fixed.get("c_light", 1.0)),
            )

    row = ScanRow(
        param=float(value),
        p_numeric=p_numeric,
        p_closed=p_closed,
        p_reduced=p_reduced,
        w_antisym=w_antisym,
    )
    _check_row(row)
    return row, warnings


def _check_row(row: ScanRow) -> None:
    # p_reduced is exempt: the limit form may leave [0, 1] outside its
    # regime, which is advisory rather than an error.
    for name in ("p_numeric", "p_closed"):
        p = getattr(row, name)
        if p is None:
            continue
        if not math.isfinite(p) or p < -1e-10 or p > 1.0 + 1e-10:
            raise ArithmeticError(
                f"{name} = {p!r} at param {row.param!r} is not a probability"
            )
    if row.p_reduced is not None and not math.isfinite(row.p_reduced):
        raise ArithmeticError(f"p_reduced is not finite at param {row.param!r}")


def evaluate_scan_point(spec: ScanSpec, value: float) -> ScanRow:
    """Evaluate a single scan point in isolation.

    ``run_scan`` is equivalent to mapping this function over
    ``spec.values()``; points are pure and independent, so callers may
    evaluate them in any order or concurrently.
    """
    grid = model_grid(spec)
    row, _ = _evaluate_point(spec, grid, None, value)
    return row


def run_scan(spec: ScanSpec) -> ScanResult:
    """Run the scan and assemble the result table with metadata."""
    t0 = time.perf_counter()
    grid = model_grid(spec)

    # A dz sweep delays a fixed base spectrum, which each point rebuilds
    # identically; sharing the (immutable) base changes nothing and avoids
    # resampling the model per row.
    base = None
    if spec.swept == "dz" and spec.model != "shih":
        base = _base_spectrum(spec, grid)

    rows = []
    warnings: list[str] = []
    for value in spec.values():
        row, row_warnings = _evaluate_point(spec, grid, base, value)
        rows.append(row)
        for w in row_warnings:
            if w not in warnings:
                warnings.append(w)

    metadata: dict[str, Any] = {
        "model": spec.model,
        "swept": spec.swept,
        "grid": {
            "center": grid.center,
            "half_span": grid.half_span,
            "n_points": grid.n_points,
        },
        "truncation_warnings": warnings,
        "wall_time_s": time.perf_counter() - t0,
    }
    if spec.model == "shih":
        models = [_shih_model(spec, v) for v in spec.values()]
        parities = [math.fmod(4.0 * m.delta_l / m.wavelength, 2.0) for m in models]
        if spec.swept == "dz":
            metadata["norm_factor_b"] = shih_norm_factor(models[0])
            metadata["parity_4dl_over_lambda"] = parities[0]
        else:
            metadata["norm_factor_b"] = [shih_norm_factor(m) for m in models]
            metadata["parity_4dl_over_lambda"] = parities
    return ScanResult(spec=spec, rows=tuple(rows), metadata=metadata)


def compare_methods(result: ScanResult) -> ScanComparison:
    """Deviation statistics between ``p_numeric`` and ``p_closed`` columns."""
    devs = []
    for row in result.rows:
        if row.p_numeric is None or row.p_closed is None:
            raise ValueError(
                "comparison requires both numeric and closed-form columns in every row"
            )
        devs.append((abs(row.p_numeric - row.p_closed), row.param))
    max_dev, argmax = max(devs, key=lambda pair: pair[0])
    rms = math.sqrt(sum(d * d for d, _ in devs) / len(devs))
    return ScanComparison(max_abs_dev=max_dev, argmax_param=argmax, rms=rms)
