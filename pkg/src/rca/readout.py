"""Optimal linear readouts, expected error, and worst-case bounds.

A readout is a weight vector applied to the reservoir state, y_t = psi^T x_t.
The optimal weights solve the Tikhonov-regularized normal equations
(XX + reg I) psi = XY, either from analytic covariances or from sample
second moments of a simulated trajectory. The expected mean-squared error
has the closed form <E^2> = <y^2> - XY^T (XX + reg I)^{-1} XY, and Markov's
inequality turns it into the distribution-free tail bound
P[(yhat - y)^2 >= a] <= <E^2> / a.
"""

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import NumericalError
from .reservoir import StateTrajectory
from .signals import Signal, _as_samples

PSI_NORM_GUARD = 1e8
MSE_CLIP = 1e-9  # analytic MSE may dip this far below zero from roundoff


@dataclass
class Readout:
    """Readout weights plus the regularization they were solved with."""

    psi: np.ndarray
    reg: float
    source: str  # "analytic" or "empirical"

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=float)
        if not np.all(np.isfinite(self.psi)):
            raise NumericalError("readout weights are not finite")
        norm = float(np.linalg.norm(self.psi))
        if norm > PSI_NORM_GUARD:
            raise NumericalError(
                f"readout norm {norm:.3g} exceeds {PSI_NORM_GUARD:.0e}; "
                "system is too ill-conditioned for the chosen regularization")


@dataclass
class MarkovEntry:
    a: float
    bound: float
    empirical: float | None = None


@dataclass
class ErrorReport:
    """Expected/observed error summary for one task run."""

    mse: float
    target_power: float
    nmse: float
    markov: list[MarkovEntry] = field(default_factory=list)

    def to_json(self, path=None) -> str:
        doc = {
            "mse": self.mse,
            "nmse": self.nmse,
            "target_power": self.target_power,
            "markov": [
                {"a": e.a, "bound": e.bound, "empirical": e.empirical}
                for e in self.markov
            ],
        }
        text = json.dumps(doc, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _solve(xx: np.ndarray, rhs: np.ndarray, reg: float) -> np.ndarray:
    a = xx if reg == 0.0 else xx + reg * np.eye(xx.shape[0])
    try:
        return scipy.linalg.cho_solve(scipy.linalg.cho_factor(a), rhs)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"normal equations singular (reg={reg:g})") from exc


def analytic_readout(xx: np.ndarray, xy: np.ndarray, reg: float = 0.0) -> Readout:
    """Solve (XX + reg I) psi = XY with a symmetric positive-definite solve."""
    return Readout(psi=_solve(xx, xy, reg), reg=reg, source="analytic")


def empirical_readout(traj: StateTrajectory, target, reg: float = 0.0) -> Readout:
    """Ridge regression on per-sample second moments of a trajectory.

    ``target`` must already be aligned with the retained state columns
    (same length, post-washout).
    """
    y = _as_samples(target)
    s = traj.states
    if y.size != s.shape[1]:
        raise ValueError(
            f"length mismatch: trajectory has {s.shape[1]} steps, target {y.size}")
    t = s.shape[1]
    xx = s @ s.T / t
    xy = s @ y / t
    return Readout(psi=_solve(xx, xy, reg), reg=reg, source="empirical")


def predict(readout: Readout, traj: StateTrajectory) -> Signal:
    """Apply the readout to every retained state column."""
    if readout.psi.size != traj.states.shape[0]:
        raise ValueError(
            f"dimension mismatch: readout has {readout.psi.size} weights, "
            f"states have {traj.states.shape[0]} rows")
    return Signal(readout.psi @ traj.states, meta={"generator": "readout"})


def mse_analytic(target_power: float, xx: np.ndarray, xy: np.ndarray,
                 reg: float = 0.0) -> float:
    """Expected MSE of the optimal readout: <y^2> - XY^T (XX + reg I)^{-1} XY."""
    mse = target_power - float(xy @ _solve(xx, xy, reg))
    if mse < -MSE_CLIP:
        raise NumericalError(
            f"analytic MSE {mse:.6g} is negative beyond roundoff; "
            "covariances are inconsistent")
    if mse < 0.0:
        warnings.warn(f"clipping tiny negative analytic MSE {mse:.3g} to 0")
        mse = 0.0
    return mse


def markov_bound(mse: float, a_grid) -> dict[float, float]:
    """Distribution-free tail bound min(1, mse/a) for each threshold."""
    out = {}
    for a in np.atleast_1d(np.asarray(a_grid, dtype=float)):
        if a <= 0:
            raise ValueError(f"threshold a={a} must be positive")
        out[float(a)] = min(1.0, mse / float(a))
    return out


def empirical_error_stats(y, target, a_grid=None) -> ErrorReport:
    """Sample MSE/NMSE and per-threshold exceedance frequencies."""
    ya = _as_samples(y)
    ta = _as_samples(target)
    if ya.size != ta.size:
        raise ValueError(f"length mismatch: {ya.size} vs {ta.size}")
    err2 = (ya - ta) ** 2
    mse = float(err2.mean())
    power = float((ta * ta).mean())
    nmse = mse / power if power > 0 else float("inf")
    entries = []
    if a_grid is not None:
        for a, bound in markov_bound(mse, a_grid).items():
            entries.append(MarkovEntry(a=a, bound=bound,
                                       empirical=float((err2 >= a).mean())))
    return ErrorReport(mse=mse, target_power=power, nmse=nmse, markov=entries)
