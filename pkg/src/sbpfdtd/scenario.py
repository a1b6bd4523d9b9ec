"""Source waveforms, spectrum post-processing, and tissue dosimetry.

Everything here is pure construction or pure array math: waveform
factories return plain callables for the integrator's point sources,
the spectrum helpers evaluate a direct DFT on an arbitrary frequency
grid (no FFT padding games, so probe records of any length work), and
the SAR map is a nodewise quadratic form on a recorded field aggregate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgument
from .grid2d import MaterialMap

# Spectral magnitude of exp(-(t/tau)^2) falls to 1e-3 of its peak at
# f = sqrt(ln 1000)/(pi tau); inverting gives the default width for a
# requested bandwidth.
_BANDWIDTH_FACTOR = math.sqrt(math.log(1000.0)) / math.pi


@dataclass(frozen=True)
class Tissue:
    """Bulk material parameters of one tissue type."""

    density: float      # kg/m^3
    eps_rel: float
    sigma_e: float      # S/m


# Four-layer head phantom materials (innermost to outermost:
# brain, CSF, dura, skull).
TISSUES = {
    "brain": Tissue(density=1046.0, eps_rel=4.0, sigma_e=0.04),
    "csf": Tissue(density=1007.0, eps_rel=4.0, sigma_e=2.00),
    "dura": Tissue(density=1174.0, eps_rel=4.0, sigma_e=0.50),
    "skull": Tissue(density=1908.0, eps_rel=2.5, sigma_e=0.02),
}


@dataclass(frozen=True)
class GaussianPulse:
    """Unit-peak Gaussian waveform exp(-((t-t0)/tau)^2)."""

    tau: float
    t0: float

    def __call__(self, t: float) -> float:
        arg = (t - self.t0) / self.tau
        return math.exp(-arg * arg)


def gaussian_pulse(f_bw: float | None = None, *, tau: float | None = None,
                   t0: float | None = None) -> GaussianPulse:
    """Gaussian waveform from a bandwidth or an explicit width.

    When ``tau`` is omitted it is derived from the bandwidth ``f_bw``
    so the spectral magnitude drops to 1e-3 at f_bw; ``t0`` defaults
    to 4*tau, which leaves a turn-on value of exp(-16) ~ 1.1e-7.
    """
    if tau is None:
        if f_bw is None:
            raise InvalidArgument("gaussian_pulse needs f_bw or tau")
        if not f_bw > 0:
            raise InvalidArgument(f"f_bw must be positive, got {f_bw}")
        tau = _BANDWIDTH_FACTOR / f_bw
    if not tau > 0:
        raise InvalidArgument(f"tau must be positive, got {tau}")
    if t0 is None:
        t0 = 4.0 * tau
    return GaussianPulse(tau=tau, t0=t0)


@dataclass(frozen=True)
class RampedSine:
    """Sine at f0 with a C^1 polynomial turn-on over n_ramp_periods.

    The envelope is the smoothstep u^2 (3 - 2u) in u = t / t_ramp,
    whose value and slope match the constant 1 at the junction, after
    which the waveform is exactly sin(2 pi f0 t) (no phase offset).
    """

    f0: float
    n_ramp_periods: int

    @property
    def t_ramp(self) -> float:
        return self.n_ramp_periods / self.f0

    def __call__(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        s = math.sin(2.0 * math.pi * self.f0 * t)
        if t >= self.t_ramp:
            return s
        u = t / self.t_ramp
        return u * u * (3.0 - 2.0 * u) * s


def ramped_sine(f0: float, n_ramp_periods: int = 3) -> RampedSine:
    if not f0 > 0:
        raise InvalidArgument(f"f0 must be positive, got {f0}")
    if n_ramp_periods < 1:
        raise InvalidArgument(
            f"n_ramp_periods must be at least 1, got {n_ramp_periods}")
    return RampedSine(f0=f0, n_ramp_periods=int(n_ramp_periods))


def dft_spectrum(series: Sequence[float], dt: float, f_grid: Sequence[float],
                 window: str | None = None) -> np.ndarray:
    """Magnitude of the direct DFT of a uniformly sampled series.

    Evaluates |dt * sum_k w_k s_k exp(-2 pi i f k dt)| at each requested
    frequency; the grid is arbitrary (not tied to 1/(N dt) bins).
    ``window`` selects an optional Hann taper.  The result is linear in
    the input series.
    """
    values = np.asarray(series, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise InvalidArgument("series must be 1-D with at least 2 samples")
    if not dt > 0:
        raise InvalidArgument(f"dt must be positive, got {dt}")
    freqs = np.asarray(f_grid, dtype=float)
    if freqs.size == 0:
        raise InvalidArgument("empty frequency grid")
    if window is None:
        tapered = values
    elif window == "hann":
        tapered = values * np.hanning(values.size)
    else:
        raise InvalidArgument(f"unknown window {window!r}")

    times = dt * np.arange(values.size)
    out = np.empty(freqs.size)
    # Chunk the frequency axis so the phase matrix stays small.
    chunk = max(1, int(4.0e6 / max(values.size, 1)))
    for start in range(0, freqs.size, chunk):
        f_part = freqs[start:start + chunk]
        phases = np.exp(-2j * np.pi * np.outer(f_part, times))
        out[start:start + chunk] = np.abs(phases @ tapered) * dt
    return out


@dataclass(frozen=True)
class SpectralPeak:
    frequency: float
    magnitude: float
    rel_height: float   # magnitude / max magnitude over the grid


def find_spectral_peaks(f_grid: Sequence[float], magnitudes: Sequence[float],
                        rel_threshold: float = 0.1) -> list[SpectralPeak]:
    """Interior local maxima at least rel_threshold of the global max.

    Peak frequencies are refined by fitting a parabola through the
    sample and its two neighbours (clamped to that bin), which locates
    resolved peaks well below the grid spacing.  Returned in order of
    increasing frequency.
    """
    freqs = np.asarray(f_grid, dtype=float)
    mags = np.asarray(magnitudes, dtype=float)
    if freqs.shape != mags.shape or freqs.ndim != 1:
        raise InvalidArgument("frequency grid and magnitudes must match 1-D")
    if freqs.size < 3:
        return []
    top = mags.max()
    if not top > 0:
        return []
    peaks = []
    for i in range(1, freqs.size - 1):
        if not (mags[i] > mags[i - 1] and mags[i] > mags[i + 1]):
            continue
        if mags[i] < rel_threshold * top:
            continue
        denom = mags[i - 1] - 2.0 * mags[i] + mags[i + 1]
        if denom < 0:
            shift = 0.5 * (mags[i - 1] - mags[i + 1]) / denom
            shift = min(max(shift, -1.0), 1.0)
        else:
            shift = 0.0
        f_peak = freqs[i] + shift * 0.5 * (freqs[i + 1] - freqs[i - 1])
        peaks.append(SpectralPeak(frequency=float(f_peak),
                                  magnitude=float(mags[i]),
                                  rel_height=float(mags[i] / top)))
    return peaks


SAR_FIELD_NORMS = ("instantaneous-peak", "rms")


def compute_sar(field: np.ndarray, materials: MaterialMap,
                field_norm: str = "instantaneous-peak") -> np.ndarray:
    """Nodewise specific absorption rate for a recorded Ez aggregate.

    ``field`` is either the peak |Ez| over the recorded window or the
    RMS of Ez, per ``field_norm``.  Peak fields carry the sinusoidal
    1/2: SAR = sigma |E|^2 / (2 rho); RMS fields do not.  Zero
    conductivity gives exactly zero regardless of density.
    """
    field = np.asarray(field, dtype=float)
    if field.shape != materials.sigma_e.shape:
        raise InvalidArgument(
            f"field shape {field.shape} does not match material "
            f"shape {materials.sigma_e.shape}")
    if field_norm == "instantaneous-peak":
        scale = 0.5
    elif field_norm == "rms":
        scale = 1.0
    else:
        raise InvalidArgument(f"unknown field norm {field_norm!r}")
    out = np.zeros_like(field)
    lossy = materials.sigma_e > 0
    np.divide(scale * materials.sigma_e * field * field, materials.density,
              out=out, where=lossy)
    return out
