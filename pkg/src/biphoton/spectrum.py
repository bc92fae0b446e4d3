"""Discretized two-photon spectral amplitudes.

A two-photon state over two input ports is represented by a complex matrix
``c[i, j]`` on a shared uniform angular-frequency grid, the coefficient of
one photon at ``omega_i`` in port 1 and one at ``omega_j`` in port 2.  The
matrix absorbs the grid spacing, so every continuous spectral integral
becomes an exact finite sum and ``sum |c|**2 == 1`` carries the probability
interpretation directly.

All types are immutable value objects; every operation returns a new value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DegenerateSpectrumError

# Norm drift allowed on already-normalized spectra (pure-phase and
# transpose operations preserve the norm to machine precision).
NORM_TOL = 1e-12

# Squared weight below which a symmetry component counts as absent.
_ZERO_WEIGHT = 1e-30


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform discretization of a 1D angular-frequency axis.

    The point count must be odd so the center frequency is itself a grid
    point and the offsets ``nu = omega - center`` come in exact ``+nu/-nu``
    pairs (required for spectra supported on the anti-diagonal
    ``nu_2 = -nu_1``).

    Parameters
    ----------
    center : float
        Center angular frequency (rad/s in SI mode, dimensionless in
        natural units).
    half_span : float
        Positive frequency extent on each side of the center.
    n_points : int
        Odd number of grid points, at least 3.
    """

    center: float
    half_span: float
    n_points: int

    def __post_init__(self):
        if not isinstance(self.n_points, int):
            raise ValueError("n_points must be an integer")
        if self.n_points < 3 or self.n_points % 2 == 0:
            raise ValueError(
                f"odd point count required: n_points must be odd and >= 3, got {self.n_points}"
            )
        if not (math.isfinite(self.half_span) and self.half_span > 0):
            raise ValueError(f"half_span must be positive and finite, got {self.half_span}")
        if not math.isfinite(self.center):
            raise ValueError("center must be finite")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_span / (self.n_points - 1)

    @property
    def center_index(self) -> int:
        return (self.n_points - 1) // 2

    def offsets(self) -> np.ndarray:
        """Offsets ``nu_k = omega_k - center``, exactly mirror-symmetric."""
        k = np.arange(self.n_points) - self.center_index
        out = k * self.spacing
        out.flags.writeable = False
        return out

    def frequencies(self) -> np.ndarray:
        """Grid frequencies ``omega_k = center + nu_k``."""
        out = self.center + self.offsets()
        out.flags.writeable = False
        return out


def make_grid(center: float, half_span: float, n_points: int) -> FrequencyGrid:
    """Build a :class:`FrequencyGrid`; rejects even point counts."""
    return FrequencyGrid(center=center, half_span=half_span, n_points=n_points)


@dataclass(frozen=True, eq=False)
class BiphotonSpectrum:
    """Unit-norm complex amplitude matrix over ``grid x grid``.

    ``amplitudes[i, j]`` is the coefficient of the two-photon component
    with port-1 frequency ``omega_i`` and port-2 frequency ``omega_j``.
    Instances hold ``sum |c|**2 == 1`` (within 1e-12) and only finite
    entries; construct through :meth:`from_array` or the model builders,
    which normalize.

    ``warnings`` carries non-fatal construction diagnostics, e.g. grid
    truncation notices from the model builders.
    """

    grid: FrequencyGrid
    amplitudes: np.ndarray
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        amp = self.amplitudes
        n = self.grid.n_points
        if amp.shape != (n, n):
            raise ValueError(f"amplitude matrix must be {n}x{n}, got {amp.shape}")
        if amp.dtype != np.complex128:
            raise ValueError("amplitudes must be complex128")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite (no NaN/Inf)")
        norm_sq = float(np.sum(np.abs(amp) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"spectrum must be unit-norm, got sum|c|^2 = {norm_sq!r}")

    @classmethod
    def from_array(
        cls,
        grid: FrequencyGrid,
        raw: np.ndarray,
        warnings: tuple[str, ...] = (),
    ) -> "BiphotonSpectrum":
        """Normalize ``raw`` to unit norm and wrap it.

        Raises :class:`DegenerateSpectrumError` when ``raw`` is (effectively)
        zero and therefore cannot represent a state.
        """
        raw = np.ascontiguousarray(raw, dtype=np.complex128)
        if not np.all(np.isfinite(raw)):
            raise ValueError("amplitudes must be finite (no NaN/Inf)")
        norm = math.sqrt(float(np.sum(np.abs(raw) ** 2)))
        if norm < 1e-150:
            raise DegenerateSpectrumError(
                "degenerate spectrum: amplitude matrix is (effectively) zero"
            )
        amp = raw / norm
        amp.flags.writeable = False
        return cls(grid=grid, amplitudes=amp, warnings=tuple(warnings))

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def with_warnings(self, extra: tuple[str, ...]) -> "BiphotonSpectrum":
        if not extra:
            return self
        return BiphotonSpectrum(self.grid, self.amplitudes, self.warnings + tuple(extra))


@dataclass(frozen=True, eq=False)
class TimeWavepacket:
    """Two-photon amplitude on a uniform grid of retarded times.

    ``values[m1, m2] = sum_ij c[i, j] exp(-i omega_i t_m1) exp(-i omega_j t_m2)``
    on the time grid conjugate to the frequency grid: ``n`` points with step
    ``dt = 2*pi / (n * domega)``, centered on zero, covering one full period
    ``n*dt = 2*pi/domega`` of the sampled transform.

    With this convention the discrete Parseval identity is exact:
    ``sum |values|**2 * dt**2 / (n*dt)**2 == sum |c|**2``, i.e.
    ``total_power() == 1`` for a unit-norm source spectrum.
    """

    time_axis: np.ndarray
    values: np.ndarray

    @property
    def spacing(self) -> float:
        return float(self.time_axis[1] - self.time_axis[0])

    def total_power(self) -> float:
        """``sum |values|**2 / n**2``; equals the source ``sum |c|**2``."""
        n = self.values.shape[0]
        return float(np.sum(np.abs(self.values) ** 2)) / n**2


class SymmetryDecomposition(NamedTuple):
    """Exchange-symmetric and -antisymmetric parts with the antisymmetric weight."""

    sym: BiphotonSpectrum | None
    antisym: BiphotonSpectrum | None
    w_antisym: float


def from_function(
    grid: FrequencyGrid,
    f: Callable[[np.ndarray, np.ndarray], np.ndarray | complex],
) -> BiphotonSpectrum:
    """Sample ``f(omega_1, omega_2)`` on the grid and normalize.

    ``f`` receives broadcastable frequency arrays ``(w1[i, j], w2[i, j])``
    and may return a scalar or an array.
    """
    w = grid.frequencies()
    w1, w2 = np.meshgrid(w, w, indexing="ij")
    raw = np.asarray(f(w1, w2), dtype=np.complex128)
    if raw.ndim == 0:
        raw = np.full((grid.n_points, grid.n_points), complex(raw), dtype=np.complex128)
    else:
        raw = np.broadcast_to(raw, (grid.n_points, grid.n_points)).copy()
    return BiphotonSpectrum.from_array(grid, raw)


def swap(s: BiphotonSpectrum) -> BiphotonSpectrum:
    """Exchange the two frequency arguments: ``c'[i, j] = c[j, i]``."""
    amp = np.ascontiguousarray(s.amplitudes.T)
    amp.flags.writeable = False
    return BiphotonSpectrum(s.grid, amp, s.warnings)


def symmetry_decompose(s: BiphotonSpectrum) -> SymmetryDecomposition:
    """Split into exchange-symmetric and -antisymmetric parts.

    The unnormalized parts are ``a_pm = (c +- c^T) / 2``; they are orthogonal,
    so their squared norms add to 1.  Each nonzero part is returned
    renormalized; a zero part is returned as ``None`` with weight 0.
    """
    c = s.amplitudes
    a_plus = (c + c.T) / 2.0
    a_minus = (c - c.T) / 2.0
    w_minus = float(np.sum(np.abs(a_minus) ** 2))
    w_plus = float(np.sum(np.abs(a_plus) ** 2))

    sym = None
    antisym = None
    if w_plus > _ZERO_WEIGHT:
        sym = BiphotonSpectrum.from_array(s.grid, a_plus)
    if w_minus > _ZERO_WEIGHT:
        antisym = BiphotonSpectrum.from_array(s.grid, a_minus)
    w_antisym = 0.0 if antisym is None else min(max(w_minus, 0.0), 1.0)
    return SymmetryDecomposition(sym=sym, antisym=antisym, w_antisym=w_antisym)


def apply_path_delays(
    s: BiphotonSpectrum, z1: float, z2: float, c_light: float = 1.0
) -> BiphotonSpectrum:
    """Propagate port 1 over path ``z1`` and port 2 over ``z2``.

    Multiplies each entry by ``exp(i (omega_i z1 + omega_j z2) / c_light)``;
    a pure phase, so every modulus and the total norm are unchanged.
    """
    if not (math.isfinite(c_light) and c_light > 0):
        raise ValueError("c_light must be positive and finite")
    w = s.grid.frequencies()
    phase1 = np.exp(1j * w * (z1 / c_light))
    phase2 = np.exp(1j * w * (z2 / c_light))
    amp = s.amplitudes * phase1[:, None] * phase2[None, :]
    amp.flags.writeable = False
    return BiphotonSpectrum(s.grid, amp, s.warnings)


def exchange_overlap(s: BiphotonSpectrum) -> float:
    """Real overlap ``V = Re sum c*[i,j] c[j,i]`` between ``c`` and its swap.

    ``V = 1`` for symmetric and ``V = -1`` for antisymmetric spectra; at a
    balanced splitter the coincidence probability is ``(1 - V) / 2``.
    """
    c = s.amplitudes
    v = float(np.real(np.vdot(c, c.T)))
    return min(1.0, max(-1.0, v))


def separability_rank1_fraction(s: BiphotonSpectrum) -> float:
    """Weight of the best rank-1 (product-state) approximation.

    Squared largest singular value over the squared Frobenius norm; equals 1
    exactly when the spectrum factorizes as ``C1(omega_1) * C2(omega_2)``
    (an un-entangled pair), and is smaller otherwise.
    """
    svals = np.linalg.svd(s.amplitudes, compute_uv=False)
    total = float(np.sum(svals**2))
    return float(svals[0] ** 2) / total


def time_domain(s: BiphotonSpectrum) -> TimeWavepacket:
    """Transform to the conjugate time grid by direct double summation.

    See :class:`TimeWavepacket` for the grid and Parseval conventions.
    """
    grid = s.grid
    n = grid.n_points
    dt = 2.0 * math.pi / (n * grid.spacing)
    t = (np.arange(n) - grid.center_index) * dt
    # values = F c F^T with F[m, i] = exp(-i omega_i t_m)
    f = np.exp(-1j * np.outer(t, grid.frequencies()))
    values = f @ s.amplitudes @ f.T
    t.flags.writeable = False
    values.flags.writeable = False
    return TimeWavepacket(time_axis=t, values=values)
