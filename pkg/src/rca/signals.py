"""Scalar input signals and their second-order statistics.

Generators produce i.i.d. uniform and exponentially correlated sequences;
estimators compute auto- and cross-correlations at nonnegative lags; the
spectral helpers give closed-form power spectral densities on a uniform
frequency grid over one digital period [-pi, pi).

Conventions: correlations are uncentered second moments, R(k) = <u_t u_{t-k}>,
normalized by the number of terms actually summed (n - k). Spectra follow
S(f) = sum_k R(k) e^{-ifk}, so R(k) = (1/2pi) int S(f) e^{ifk} df.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.signal import lfilter


@dataclass
class Signal:
    """A finite scalar time series plus provenance metadata."""

    samples: np.ndarray
    meta: dict = field(default_factory=dict)
    mean: float = field(init=False)
    variance: float = field(init=False)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise ValueError("signal must be a non-empty 1-D array")
        self.mean = float(self.samples.mean())
        self.variance = float(self.samples.var())

    def __len__(self) -> int:
        return self.samples.size


@dataclass
class CorrelationFunction:
    """Correlation values indexed by lag 0..max_lag.

    kind is "empirical" for estimated functions or "analytic-exponential"
    for the closed family R(k) = e^{-alpha k}.
    """

    values: np.ndarray
    kind: str = "empirical"
    alpha: float | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size == 0:
            raise ValueError("correlation function needs at least lag 0")

    @property
    def max_lag(self) -> int:
        return self.values.size - 1

    def __len__(self) -> int:
        return self.values.size


@dataclass
class SpectralDensity:
    """Spectral density sampled on a uniform grid over [-pi, pi).

    When the density comes from a closed form, ``func`` evaluates it at
    arbitrary frequencies; grid-only densities leave it as None.
    """

    frequencies: np.ndarray
    values: np.ndarray
    grid_size: int
    func: Callable[[np.ndarray], np.ndarray] | None = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self):
        self.frequencies = np.asarray(self.frequencies, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.frequencies.shape != self.values.shape:
            raise ValueError("frequency grid and values must align")
        if self.grid_size != self.frequencies.size:
            raise ValueError("grid_size must match the number of grid points")

    def conjugate_symmetry_error(self) -> float:
        """Max |S(-f) - conj(S(f))| over the grid (grid is -f-closed)."""
        m = self.grid_size
        # index of -f_k on the standard grid f_k = -pi + k*h is (m - k) % m
        mirror = self.values[(-np.arange(m)) % m]
        return float(np.max(np.abs(mirror - np.conj(self.values))))


def frequency_grid(size: int) -> np.ndarray:
    """Uniform grid f_k = -pi + k * 2pi/size, k = 0..size-1."""
    if size < 2:
        raise ValueError("grid size must be at least 2")
    return -np.pi + 2.0 * np.pi * np.arange(size) / size


def _as_samples(sig) -> np.ndarray:
    if isinstance(sig, Signal):
        return sig.samples
    return np.asarray(sig, dtype=float)


def standardize(s: Signal) -> Signal:
    """Shift and scale to zero mean and unit variance.

    Raises ValueError for a constant signal.
    """
    arr = _as_samples(s)
    std = arr.std()
    if std == 0.0:
        raise ValueError("cannot standardize a zero-variance signal")
    meta = dict(s.meta) if isinstance(s, Signal) else {}
    meta["standardized"] = True
    return Signal((arr - arr.mean()) / std, meta=meta)


def gen_iid_uniform(n: int, lo: float, hi: float, seed: int) -> Signal:
    """n i.i.d. samples uniform on [lo, hi), reproducible from seed."""
    if n <= 0:
        raise ValueError("n must be positive")
    if lo >= hi:
        raise ValueError(f"invalid range: lo={lo} must be < hi={hi}")
    rng = np.random.default_rng(seed)
    return Signal(
        rng.uniform(lo, hi, n),
        meta={"generator": "iid_uniform", "seed": seed, "lo": lo, "hi": hi},
    )


def gen_expcorr(n: int, alpha: float, seed: int) -> Signal:
    """Standardized sequence with autocorrelation R(k) = e^{-alpha k}.

    Uniform noise is passed through the one-pole low-pass filter
    s_t = e^{-alpha} s_{t-1} + r_t, which is the unique linear filter whose
    standardized output has exactly exponential autocorrelation. A burn-in
    of 10/alpha samples is discarded so the output is stationary.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    q = np.exp(-alpha)
    burn = int(np.ceil(10.0 / alpha))
    rng = np.random.default_rng(seed)
    raw = rng.uniform(0.0, 1.0, n + burn)
    filtered = lfilter([1.0], [1.0, -q], raw)[burn:]
    out = standardize(Signal(filtered))
    out.meta = {"generator": "expcorr", "seed": seed, "alpha": alpha}
    return out


def empirical_autocorr(s, max_lag: int) -> CorrelationFunction:
    """R(k) = (1/(n-k)) sum_t s_t s_{t-k} for k = 0..max_lag (uncentered)."""
    arr = _as_samples(s)
    n = arr.size
    if max_lag >= n:
        raise ValueError(f"max_lag={max_lag} must be < signal length {n}")
    vals = np.empty(max_lag + 1)
    for k in range(max_lag + 1):
        vals[k] = arr[k:] @ arr[: n - k] / (n - k)
    return CorrelationFunction(vals, kind="empirical")


def empirical_crosscorr(u, y, max_lag: int) -> CorrelationFunction:
    """R_uy(k) = (1/(n-k)) sum_t u_{t-k} y_t for k = 0..max_lag."""
    ua = _as_samples(u)
    ya = _as_samples(y)
    if ua.size != ya.size:
        raise ValueError(f"length mismatch: {ua.size} vs {ya.size}")
    n = ua.size
    if max_lag >= n:
        raise ValueError(f"max_lag={max_lag} must be < signal length {n}")
    vals = np.empty(max_lag + 1)
    for k in range(max_lag + 1):
        vals[k] = ua[: n - k] @ ya[k:] / (n - k)
    return CorrelationFunction(vals, kind="empirical")


def exponential_corr(alpha: float, max_lag: int) -> CorrelationFunction:
    """Analytic R(k) = e^{-alpha k} on lags 0..max_lag."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return CorrelationFunction(
        np.exp(-alpha * np.arange(max_lag + 1)),
        kind="analytic-exponential",
        alpha=alpha,
    )


def psd_exponential(alpha: float, grid: int | np.ndarray = 1024) -> SpectralDensity:
    """Spectral density of the unit-variance exponentially correlated signal.

    S(f) = (1 - e^{-2 alpha}) / (1 - 2 e^{-alpha} cos f + e^{-2 alpha}),
    the Fourier transform of R(k) = e^{-alpha |k|}; real and positive.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    q = np.exp(-alpha)

    def func(f):
        return (1.0 - q * q) / (1.0 - 2.0 * q * np.cos(f) + q * q)

    freqs = frequency_grid(grid) if np.isscalar(grid) else np.asarray(grid, float)
    return SpectralDensity(freqs, func(freqs), freqs.size, func=func)


def psd_flat(power: float = 1.0, grid: int | np.ndarray = 1024) -> SpectralDensity:
    """Flat spectrum of an i.i.d. signal with second moment ``power``."""

    def func(f):
        return power * np.ones_like(np.asarray(f, dtype=float))

    freqs = frequency_grid(grid) if np.isscalar(grid) else np.asarray(grid, float)
    return SpectralDensity(freqs, func(freqs), freqs.size, func=func)


def signal_to_csv(s: Signal, path) -> None:
    np.savetxt(path, s.samples, header="u", comments="", fmt="%.17g")


def signal_from_csv(path) -> Signal:
    return Signal(np.loadtxt(path, skiprows=1))


def corr_to_csv(c: CorrelationFunction, path) -> None:
    lags = np.arange(c.values.size)
    np.savetxt(
        path,
        np.column_stack([lags, c.values]),
        header="lag,value",
        comments="",
        delimiter=",",
        fmt=["%d", "%.17g"],
    )


def corr_from_csv(path) -> CorrelationFunction:
    data = np.loadtxt(path, skiprows=1, delimiter=",")
    return CorrelationFunction(np.atleast_2d(data)[:, 1], kind="empirical")
