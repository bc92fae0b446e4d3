"""Closed-form physical spectra and their analytic coincidence curves.

Four families:

* Gaussian pair — two identical single-photon Gaussians of bandwidth
  ``sigma`` around a common center, optionally multiplied by a Gaussian
  pump envelope in ``omega_1 + omega_2``.  Its balanced-splitter delay scan
  is the classic dip ``P = (1 - exp(-(sigma*dz/c)**2 / 2)) / 2``.
* Two-path (Shih-type) pair — the pump-entangled Gaussian pair with the
  port-1 photon split over a short and a long path, giving a
  ``cos(omega_1 * dl / c)`` modulation.  ``shih_exact`` is its exact
  coincidence probability; ``shih_reduced`` the wide-separation,
  narrow-pump limit.
* Delta pump — the infinitesimal-pump-bandwidth limit: support exactly on
  the anti-diagonal ``nu_2 = -nu_1``, with a cosine (symmetric) or sine
  (antisymmetric) profile depending on the path-difference parity.
* Antisymmetric Bell — the two-frequency singlet combination, the textbook
  perfectly anti-coalescent state.

Everything uses angular frequencies; lengths and ``c_light`` only enter via
the dimensionless groups ``sigma*dz/c``, ``sigma*dl/c``, ``beta`` and
``dl/lambda``, so natural units (``sigma = c = 1``) and SI values give
identical physics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError
from .spectrum import BiphotonSpectrum, FrequencyGrid

# Minimum grid coverage (in units of sigma) below which model builders
# attach a truncation warning to the result.
_COVERAGE_SIGMAS = 4.0

# On-grid snap tolerance for the Bell tones, relative to the grid spacing.
_SNAP_TOL = 1e-9


@dataclass(frozen=True)
class GaussianPairModel:
    """Symmetric Gaussian two-photon spectrum.

    ``pump_sigma`` selects the pump envelope in ``omega_1 + omega_2``:
    ``None`` for a flat envelope (un-entangled product state), or the
    bandwidth of a Gaussian envelope centered on ``2*center``.
    """

    center: float
    sigma: float
    pump_sigma: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError("sigma must be positive and finite")
        if self.pump_sigma is not None and not (
            math.isfinite(self.pump_sigma) and self.pump_sigma > 0
        ):
            raise ValueError("pump_sigma must be positive and finite when given")
        if not math.isfinite(self.center):
            raise ValueError("center must be finite")


@dataclass(frozen=True)
class ShihModel:
    """Pump-entangled Gaussian pair with a two-path (short/long) signal arm.

    ``l_short`` and ``l_long`` are the two signal path lengths, ``z2`` the
    idler path.  Derived quantities: half path difference
    ``delta_l = (l_long - l_short) / 2``, mean signal path
    ``z1 = (l_long + l_short) / 2``, pump-to-photon bandwidth ratio
    ``beta = sigma_p / sigma`` and carrier wavelength
    ``wavelength = 2*pi*c_light/center``.
    """

    center: float
    sigma: float
    sigma_p: float
    l_short: float
    l_long: float
    z2: float = 0.0
    c_light: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError("sigma must be positive and finite")
        if not (math.isfinite(self.sigma_p) and self.sigma_p > 0):
            raise ValueError("sigma_p must be positive and finite")
        if not (math.isfinite(self.center) and self.center > 0):
            raise ValueError("center must be positive (it sets the carrier wavelength)")
        if not (math.isfinite(self.c_light) and self.c_light > 0):
            raise ValueError("c_light must be positive and finite")
        if self.l_long < self.l_short:
            raise ValueError("l_long must be >= l_short")
        if not (math.isfinite(self.l_short) and math.isfinite(self.l_long) and math.isfinite(self.z2)):
            raise ValueError("path lengths must be finite")

    @property
    def delta_l(self) -> float:
        return (self.l_long - self.l_short) / 2.0

    @property
    def z1(self) -> float:
        return (self.l_long + self.l_short) / 2.0

    @property
    def beta(self) -> float:
        return self.sigma_p / self.sigma

    @property
    def wavelength(self) -> float:
        return 2.0 * math.pi * self.c_light / self.center

    @classmethod
    def from_path_difference(
        cls,
        center: float,
        sigma: float,
        sigma_p: float,
        delta_l: float,
        z1: float = 0.0,
        z2: float = 0.0,
        c_light: float = 1.0,
    ) -> "ShihModel":
        """Build from the half path difference and mean signal path."""
        if delta_l < 0:
            raise ValueError("delta_l must be >= 0")
        return cls(
            center=center,
            sigma=sigma,
            sigma_p=sigma_p,
            l_short=z1 - delta_l,
            l_long=z1 + delta_l,
            z2=z2,
            c_light=c_light,
        )


def _coverage_warnings(grid: FrequencyGrid, center: float, sigma: float) -> tuple[str, ...]:
    lo = grid.center - grid.half_span
    hi = grid.center + grid.half_span
    if lo > center - _COVERAGE_SIGMAS * sigma or hi < center + _COVERAGE_SIGMAS * sigma:
        return (
            f"grid [{lo:g}, {hi:g}] does not cover the model support "
            f"[{center - _COVERAGE_SIGMAS * sigma:g}, {center + _COVERAGE_SIGMAS * sigma:g}] "
            f"(center +- {_COVERAGE_SIGMAS:g} sigma); the sampled spectrum is truncated",
        )
    return ()


def gaussian_pair_spectrum(m: GaussianPairModel, grid: FrequencyGrid) -> BiphotonSpectrum:
    """Sample the (optionally pump-entangled) Gaussian pair on ``grid``.

    The result is exchange-symmetric; with a flat pump it is an exact outer
    product of two identical 1D Gaussians (rank-1, un-entangled).
    """
    w = grid.frequencies()
    w1, w2 = np.meshgrid(w, w, indexing="ij")
    raw = np.exp(
        -((w1 - m.center) ** 2 + (w2 - m.center) ** 2) / (2.0 * m.sigma**2)
    ).astype(np.complex128)
    if m.pump_sigma is not None:
        raw *= np.exp(-((w1 + w2 - 2.0 * m.center) ** 2) / (2.0 * m.pump_sigma**2))
    return BiphotonSpectrum.from_array(
        grid, raw, warnings=_coverage_warnings(grid, m.center, m.sigma)
    )


def hom_dip_closed(sigma: float, dz: float, c_light: float = 1.0) -> float:
    """Balanced-splitter coincidence of the Gaussian pair at path delay ``dz``.

    ``P = (1 - exp(-(sigma*dz/c)**2 / 2)) / 2``: zero at ``dz = 0`` (perfect
    coalescence), 1/2 at large delay, dip width ``c/sigma``.  Independent of
    the pump envelope.
    """
    if not (math.isfinite(sigma) and sigma > 0):
        raise ValueError("sigma must be positive and finite")
    x = sigma * dz / c_light
    return 0.5 * (1.0 - math.exp(-0.5 * x * x))


def shih_spectrum(m: ShihModel, grid: FrequencyGrid) -> BiphotonSpectrum:
    """Sample the two-path spectrum on ``grid``.

    Amplitude (up to normalization):

        exp(-(w1+w2-2*center)**2 / (2*sigma_p**2))
        * exp(-((w1-center)**2 + (w2-center)**2) / (2*sigma**2))
        * exp(i*(w1*z1 + w2*z2)/c) * cos(w1*delta_l/c)

    Raises :class:`DegenerateSpectrumError` when the cosine node wipes out
    the entire sampled support.
    """
    w = grid.frequencies()
    w1, w2 = np.meshgrid(w, w, indexing="ij")
    envelope = np.exp(
        -((w1 + w2 - 2.0 * m.center) ** 2) / (2.0 * m.sigma_p**2)
        - ((w1 - m.center) ** 2 + (w2 - m.center) ** 2) / (2.0 * m.sigma**2)
    )
    modulation = np.cos(w1 * (m.delta_l / m.c_light))
    raw = envelope * modulation * np.exp(1j * (w1 * (m.z1 / m.c_light) + w2 * (m.z2 / m.c_light)))

    env_norm = float(np.sum(envelope**2))
    raw_norm = float(np.sum(np.abs(raw) ** 2))
    if env_norm > 0.0 and raw_norm / env_norm < 1e-15:
        raise DegenerateSpectrumError(
            "degenerate spectrum: path-difference modulation annihilates the sampled support"
        )
    return BiphotonSpectrum.from_array(
        grid, raw, warnings=_coverage_warnings(grid, m.center, m.sigma)
    )


def shih_norm_factor(m: ShihModel) -> float:
    """Mean squared path modulation ``B`` under the Gaussian envelope.

    ``B = (1 + cos(4*pi*delta_l/lambda) * exp(-((1+beta^2)/(2+beta^2)) * (sigma*delta_l/c)**2)) / 2``.

    It equals the squared norm of the two-path spectrum relative to the
    unmodulated envelope, is 1 at ``delta_l = 0`` and tends to 1/2 once the
    path difference far exceeds the single-photon coherence length.
    """
    beta2 = m.beta**2
    xl = m.sigma * m.delta_l / m.c_light
    phase = 4.0 * math.pi * m.delta_l / m.wavelength
    return 0.5 * (1.0 + math.cos(phase) * math.exp(-(1.0 + beta2) / (2.0 + beta2) * xl * xl))


def shih_exact(m: ShihModel, dz: float) -> float:
    """Exact balanced-splitter coincidence of the two-path spectrum.

    ``dz`` re-parameterizes the signal/idler path mismatch ``z1 - z2``.

    ``P = (1 - [cos(4*pi*delta_l/lambda) * exp(-((beta^2/(2+beta^2))*dl^2 + dz^2)*(sigma/c)^2/2)
    + exp(-((dl+dz)*sigma/c)^2/2)/2 + exp(-((dl-dz)*sigma/c)^2/2)/2] / (2*B)) / 2``
    with ``B`` from :func:`shih_norm_factor`.
    """
    b = shih_norm_factor(m)
    if abs(b) < 1e-15:
        raise DegenerateSpectrumError(
            "degenerate spectrum: normalization factor vanishes (path modulation "
            "annihilates the state)"
        )
    beta2 = m.beta**2
    s_over_c = m.sigma / m.c_light
    dl = m.delta_l
    phase = 4.0 * math.pi * dl / m.wavelength
    t_pump = math.cos(phase) * math.exp(
        -0.5 * ((beta2 / (2.0 + beta2)) * dl * dl + dz * dz) * s_over_c**2
    )
    t_plus = 0.5 * math.exp(-0.5 * ((dl + dz) * s_over_c) ** 2)
    t_minus = 0.5 * math.exp(-0.5 * ((dl - dz) * s_over_c) ** 2)
    return 0.5 * (1.0 - (t_pump + t_plus + t_minus) / (2.0 * b))


def shih_reduced(m: ShihModel, dz: float) -> float:
    """Limit form of :func:`shih_exact` for ``delta_l >> c/sigma`` and ``beta << 1``.

    ``P = (1 - cos(4*pi*delta_l/lambda) * exp(-(sigma*dz/c)^2/2)
    - exp(-((dl+dz)*sigma/c)^2/2)/2 - exp(-((dl-dz)*sigma/c)^2/2)/2) / 2``.

    The regime is not enforced; outside it the value simply drifts from the
    exact curve.
    """
    s_over_c = m.sigma / m.c_light
    dl = m.delta_l
    phase = 4.0 * math.pi * dl / m.wavelength
    t_pump = math.cos(phase) * math.exp(-0.5 * (dz * s_over_c) ** 2)
    t_plus = 0.5 * math.exp(-0.5 * ((dl + dz) * s_over_c) ** 2)
    t_minus = 0.5 * math.exp(-0.5 * ((dl - dz) * s_over_c) ** 2)
    return 0.5 * (1.0 - t_pump - t_plus - t_minus)


def shih_regime_notes(m: ShihModel) -> tuple[str, ...]:
    """Advisory notes when the reduced form is used outside its regime."""
    notes = []
    xl = m.sigma * m.delta_l / m.c_light
    if xl < 5.0:
        notes.append(
            f"reduced form assumes sigma*delta_l/c >> 1; have {xl:g}"
        )
    if m.beta > 0.1:
        notes.append(f"reduced form assumes beta << 1; have {m.beta:g}")
    return tuple(notes)


def delta_pump_spectrum(
    sigma: float,
    center: float,
    dl: float,
    parity: str,
    grid: FrequencyGrid,
    c_light: float = 1.0,
) -> BiphotonSpectrum:
    """Infinitesimal-pump-bandwidth spectrum on the anti-diagonal.

    Support sits exactly on the cells ``nu_2 = -nu_1`` with profile
    ``exp(-nu**2/sigma**2) * cos(nu*dl/c)`` for ``parity="even"`` (symmetric)
    or ``... * sin(nu*dl/c)`` for ``parity="odd"`` (antisymmetric, which has
    an exact zero at the degenerate cell ``nu = 0``).
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if not (math.isfinite(sigma) and sigma > 0):
        raise ValueError("sigma must be positive and finite")
    if not math.isclose(grid.center, center, rel_tol=1e-12, abs_tol=1e-300):
        raise ValueError(
            f"grid center {grid.center!r} must coincide with the model center {center!r}"
        )
    nu = grid.offsets()
    envelope = np.exp(-(nu**2) / sigma**2)
    arg = nu * (dl / c_light)
    profile = envelope * (np.cos(arg) if parity == "even" else np.sin(arg))

    n = grid.n_points
    raw = np.zeros((n, n), dtype=np.complex128)
    idx = np.arange(n)
    raw[idx, n - 1 - idx] = profile
    return BiphotonSpectrum.from_array(
        grid, raw, warnings=_coverage_warnings(grid, center, sigma)
    )


def bell_antisymmetric_spectrum(
    omega_a: float, omega_b: float, grid: FrequencyGrid
) -> BiphotonSpectrum:
    """Two-frequency singlet ``(|a,b> - |b,a>) / sqrt(2)``.

    The tones snap to the nearest grid cells (with a warning when they are
    not already on-grid); coinciding cells antisymmetrize to zero and raise
    :class:`DegenerateSpectrumError`.
    """
    warnings = []
    indices = []
    for name, omega in (("omega_a", omega_a), ("omega_b", omega_b)):
        pos = (omega - grid.center) / grid.spacing + grid.center_index
        idx = int(round(pos))
        if idx < 0 or idx >= grid.n_points:
            raise ValueError(f"{name} = {omega!r} lies outside the grid")
        snapped = grid.center + (idx - grid.center_index) * grid.spacing
        if abs(snapped - omega) > _SNAP_TOL * grid.spacing:
            warnings.append(f"{name} = {omega:g} snapped to grid point {snapped:g}")
        indices.append(idx)

    ia, ib = indices
    if ia == ib:
        raise DegenerateSpectrumError(
            "degenerate spectrum: the two tones fall on the same grid cell, the "
            "antisymmetric combination vanishes"
        )
    n = grid.n_points
    raw = np.zeros((n, n), dtype=np.complex128)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    raw[ia, ib] = inv_sqrt2
    raw[ib, ia] = -inv_sqrt2
    return BiphotonSpectrum.from_array(grid, raw, warnings=tuple(warnings))
