"""Exact state covariances, memory functions, and total memory.

Three interchangeable backends compute the stationary second moments of a
linear reservoir driven by a wide-sense-stationary scalar input:

* closed forms built on the eigendecomposition W = U diag(d) U^{-1} and the
  Hadamard identity  sum_i D^i vv^T D^i = (vv^T) o (1/(1 - d_a d_b)),
* truncated lag-domain sums  sum_{i,j<=k} W^i w R(i-j) w^T (W^T)^j  with a
  geometric tail bound,
* frequency-domain integrals of (I - e^{if}W)^{-1} w S(f) w^T (I - e^{-if}W^T)^{-1}.

All frequency integrals are normalized as (1/2pi) int_{-pi}^{pi} ... df and
evaluated with the midpoint rule, which converges geometrically for these
periodic integrands. Complex intermediates are kept complex throughout and
realness is asserted at the end rather than assumed.

The memory function m(tau) is the fraction of the power of the lag-tau input
recoverable by the optimal linear readout,

    m(tau) = xy^T (XX + reg I)^{-1} xy / <u^2>,

and total memory is its sum over lags.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DefectiveMatrixError, NumericalError
from .reservoir import Network, get_eig
from .signals import CorrelationFunction, SpectralDensity

# residue threshold for imaginary parts of quantities known to be real
IMAG_TOL = 1e-9
# target absolute size of the first neglected term in truncated sums
SUM_TAIL_TOL = 1e-12
K_MAX_CAP = 20_000


@dataclass
class CovariancePair:
    """State covariance XX and per-lag cross-covariances for one task."""

    xx: np.ndarray
    xy: dict[int, np.ndarray]
    backend: str
    input_model: dict = field(default_factory=dict)

    def validate(self, psd_tol: float = 1e-9) -> None:
        sym_err = np.max(np.abs(self.xx - self.xx.T))
        if sym_err > 1e-10:
            raise NumericalError(f"XX asymmetric: max deviation {sym_err:.3g}")
        min_eig = float(np.min(scipy.linalg.eigvalsh(self.xx)))
        if min_eig < -psd_tol:
            raise NumericalError(f"XX not PSD: min eigenvalue {min_eig:.3g}")

    def to_json(self, path=None) -> str:
        doc = {
            "backend": self.backend,
            "input_model": self.input_model,
            "n": self.xx.shape[0],
            "xx": self.xx.ravel().tolist(),
            "xy": {str(k): v.tolist() for k, v in sorted(self.xy.items())},
        }
        text = json.dumps(doc, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_json(cls, source) -> "CovariancePair":
        if isinstance(source, str) and source.lstrip().startswith("{"):
            doc = json.loads(source)
        else:
            with open(source) as fh:
                doc = json.load(fh)
        n = int(doc["n"])
        return cls(
            xx=np.asarray(doc["xx"], dtype=float).reshape(n, n),
            xy={int(k): np.asarray(v, dtype=float) for k, v in doc["xy"].items()},
            backend=doc["backend"],
            input_model=doc.get("input_model", {}),
        )


@dataclass
class MemoryCurve:
    """m(tau) over tau = 0..len(m)-1 plus the summed total."""

    m: np.ndarray
    total: float
    normalization: int

    def to_csv(self, path) -> None:
        taus = np.arange(self.m.size)
        np.savetxt(path, np.column_stack([taus, self.m]), header="tau,m",
                   comments="", delimiter=",", fmt=["%d", "%.17g"])


def _as_real(a: np.ndarray, what: str, tol: float = IMAG_TOL) -> np.ndarray:
    resid = float(np.max(np.abs(a.imag))) if np.iscomplexobj(a) else 0.0
    if resid > tol:
        raise NumericalError(f"{what}: imaginary residue {resid:.3g} exceeds {tol:.0e}")
    return np.ascontiguousarray(a.real) if np.iscomplexobj(a) else a


def _corr_values(r) -> np.ndarray:
    if isinstance(r, CorrelationFunction):
        return r.values
    return np.asarray(r, dtype=float)


def truncation_k_max(net: Network, tol: float = SUM_TAIL_TOL) -> int:
    """Lag horizon where the geometric state tail drops below tol.

    The neglected tail of sum_i W^i w ... is bounded by
    ||w|| max|R| lam^(k+1) / (1 - lam), so k = ceil(ln tol / ln lam) makes the
    leading factor lam^k <= tol.
    """
    lam = min(max(net.spectral_radius, 1e-6), 1.0 - 1e-9)
    k = int(math.ceil(math.log(tol) / math.log(lam)))
    return min(max(k, 32), K_MAX_CAP)


def _state_vectors(net: Network, k_max: int) -> np.ndarray:
    """Columns W^i w for i = 0..k_max (shape N x (k_max+1))."""
    v = np.empty((net.n, k_max + 1))
    v[:, 0] = net.w_in
    for i in range(1, k_max + 1):
        v[:, i] = net.w @ v[:, i - 1]
    return v


def _iid_core(net: Network) -> np.ndarray:
    """sum_i W^i w w^T (W^T)^i via the Hadamard closed form (complex)."""
    eig = get_eig(net)
    wbar = eig.u_inv @ net.w_in.astype(complex)
    denom = 1.0 - np.outer(eig.d, eig.d)
    core = np.outer(wbar, wbar) / denom
    return eig.u @ core @ eig.u.T


# ---------------------------------------------------------------------------
# state covariance XX
# ---------------------------------------------------------------------------

def state_covariance_iid(net: Network, var: float = 1.0, mean: float = 0.0) -> np.ndarray:
    """Exact XX for i.i.d. input with the given variance and mean.

    The variance part is the Hadamard closed form; a nonzero input mean adds
    the rank-one term mean^2 * s s^T with s = (I - W)^{-1} w, coming from the
    constant off-diagonal second moment <u_t u_{t'}> = mean^2 for t != t'.
    Falls back to the truncated sum when W is defective.
    """
    try:
        xx = var * _as_real(_iid_core(net), "XX iid")
    except DefectiveMatrixError:
        k = truncation_k_max(net)
        r = np.zeros(k + 1)
        r[0] = var
        xx = state_covariance_sum(net, r, k_max=k)
    if mean != 0.0:
        s = scipy.linalg.solve(np.eye(net.n) - net.w, net.w_in)
        xx = xx + (mean * mean) * np.outer(s, s)
    return 0.5 * (xx + xx.T)


def state_covariance_expcorr(net: Network, alpha: float) -> np.ndarray:
    """Exact XX for unit-variance input with R(k) = e^{-alpha |k|}.

    Splits the double sum into the i>=j part, its transpose, and the
    double-counted diagonal: with M0 the i.i.d. core and q = e^{-alpha},

        XX = M0 (I - q W^T)^{-1} + (I - q W)^{-1} M0 - M0.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    q = math.exp(-alpha)
    try:
        m0 = _as_real(_iid_core(net), "XX expcorr core")
    except DefectiveMatrixError:
        k = truncation_k_max(net)
        return state_covariance_sum(net, np.exp(-alpha * np.arange(k + 1)), k_max=k)
    upper = scipy.linalg.solve(np.eye(net.n) - q * net.w, m0).T
    xx = upper + upper.T - m0
    return 0.5 * (xx + xx.T)


def state_covariance_sum(net: Network, r_uu, k_max: int | None = None) -> np.ndarray:
    """Truncated-sum XX for an arbitrary correlation function.

    Evaluates V T(R) V^T where V stacks W^i w and T(R) is the Toeplitz matrix
    of the input correlation; works for any diagonalizable or defective W.
    """
    r = _corr_values(r_uu)
    if k_max is None:
        k_max = truncation_k_max(net)
    if r.size < k_max + 1:
        raise ValueError(
            f"correlation function covers lags up to {r.size - 1}, "
            f"need {k_max} for this network")
    v = _state_vectors(net, k_max)
    toep = scipy.linalg.toeplitz(r[: k_max + 1])
    xx = v @ toep @ v.T
    return 0.5 * (xx + xx.T)


def state_covariance_spectral(
    net: Network,
    s_uu: SpectralDensity,
    rel_tol: float = 1e-6,
    max_size: int = 1 << 17,
) -> np.ndarray:
    """XX as the frequency integral of the driven resolvent sandwich.

    The grid is doubled until the Frobenius-relative change drops below
    rel_tol; grid-only densities (no closed form) are instead checked against
    their own half-resolution subsampling.
    """
    def assemble(freqs, svals):
        c = _eigenbasis_covariance(net, freqs, svals)
        eig = get_eig(net)
        return _as_real(eig.u @ c @ eig.u.T, "XX spectral")

    return _refine_grid(s_uu, assemble, rel_tol, max_size, what="XX spectral")


def _refine_grid(density: SpectralDensity, assemble, rel_tol, max_size, what):
    if density.func is None:
        freqs, svals = density.frequencies, density.values
        if freqs.size < 4:
            raise NumericalError(f"{what}: grid too small")
        full = assemble(freqs, svals)
        half = assemble(freqs[::2], svals[::2])
        if _rel_change(full, half) > rel_tol:
            raise NumericalError(
                f"{what}: fixed grid of {freqs.size} points has not converged")
        return full
    size = max(1024, density.grid_size)
    prev = None
    while size <= max_size:
        freqs = -np.pi + 2.0 * np.pi * np.arange(size) / size
        cur = assemble(freqs, density.func(freqs))
        if prev is not None and _rel_change(cur, prev) < rel_tol:
            return cur
        prev = cur
        size *= 2
    raise NumericalError(f"{what}: no convergence up to {max_size} grid points")


def _rel_change(a, b) -> float:
    scale = np.linalg.norm(np.asarray(a).ravel())
    if scale == 0.0:
        return float(np.linalg.norm(np.asarray(b).ravel()))
    return float(np.linalg.norm((np.asarray(a) - np.asarray(b)).ravel()) / scale)


def _eigenbasis_covariance(net: Network, freqs: np.ndarray, svals: np.ndarray) -> np.ndarray:
    """C_ab = (1/2pi) int wbar_a wbar_b S(f) / ((1-e^{if}d_a)(1-e^{-if}d_b)) df."""
    eig = get_eig(net)
    wbar = eig.u_inv @ net.w_in.astype(complex)
    e_pos = np.exp(1j * freqs)
    phi_pos = 1.0 / (1.0 - np.outer(eig.d, e_pos))      # 1/(1 - e^{if} d_a)
    phi_neg = 1.0 / (1.0 - np.outer(eig.d, np.conj(e_pos)))
    weighted = phi_pos * (np.asarray(svals, dtype=complex) / freqs.size)
    return np.outer(wbar, wbar) * (weighted @ phi_neg.T)


# ---------------------------------------------------------------------------
# cross-covariance XY
# ---------------------------------------------------------------------------

def delay_covariance_iid(net: Network, tau: int, var: float = 1.0) -> np.ndarray:
    """XY for reconstructing the lag-tau input under i.i.d. drive: W^tau w var."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    v = net.w_in.copy()
    for _ in range(tau):
        v = net.w @ v
    return var * v


def delay_covariance_expcorr(net: Network, alpha: float, tau: int) -> np.ndarray:
    """XY_tau = sum_i W^i w e^{-alpha |i - tau|}, evaluated exactly.

    The i <= tau part uses the stable recurrence F_t = e^{-alpha} F_{t-1} + W^t w;
    the i > tau geometric tail is W^{tau+1} e^{-alpha} (I - e^{-alpha} W)^{-1} w.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    return _delay_covariance_expcorr_batch(net, alpha, tau)[:, -1]


def _delay_covariance_expcorr_batch(net: Network, alpha: float, tau_max: int) -> np.ndarray:
    """Columns XY_tau for tau = 0..tau_max (shape N x (tau_max+1))."""
    q = math.exp(-alpha)
    n = net.n
    tail0 = q * scipy.linalg.solve(np.eye(n) - q * net.w, net.w_in)
    out = np.empty((n, tau_max + 1))
    finite = net.w_in.copy()          # F_0 = w
    tail = net.w @ tail0              # W^{tau+1} tail0 at tau = 0
    power = net.w_in.copy()           # W^tau w
    out[:, 0] = finite + tail
    for tau in range(1, tau_max + 1):
        power = net.w @ power
        finite = q * finite + power
        tail = net.w @ tail
        out[:, tau] = finite + tail
    return out


def _delay_covariance_iid_batch(net: Network, tau_max: int, var: float = 1.0) -> np.ndarray:
    out = np.empty((net.n, tau_max + 1))
    v = net.w_in.copy()
    out[:, 0] = v
    for tau in range(1, tau_max + 1):
        v = net.w @ v
        out[:, tau] = v
    return out * var


def cross_covariance_from_corr(
    net: Network,
    r_uy,
    horizon_shift: int = 0,
    k_max: int | None = None,
) -> np.ndarray:
    """XY = sum_i W^i w r(i + horizon_shift), truncated at k_max.

    For filtering tasks the shift is zero and r is the input-target
    cross-correlation. For predicting h steps ahead the target equals the
    series h steps later, so the correlation argument starts at lag h: the
    sum runs over correlation lags j = h, h+1, ... with weights W^{j-h} w.
    The neglected tail is bounded by ||w|| max|r| lam^{k_max+1} / (1 - lam).
    """
    if horizon_shift < 0:
        raise ValueError("horizon_shift must be nonnegative")
    r = _corr_values(r_uy)
    if r.size == 0:
        raise ValueError("empty correlation function")
    if k_max is None:
        k_max = truncation_k_max(net)
    need = k_max + horizon_shift + 1
    if r.size < need:
        k_max = r.size - horizon_shift - 1
        if k_max < 0:
            raise ValueError(
                f"correlation function covers lags up to {r.size - 1}, "
                f"shorter than horizon_shift={horizon_shift}")
    v = _state_vectors(net, k_max)
    return v @ r[horizon_shift: horizon_shift + k_max + 1]


# ---------------------------------------------------------------------------
# memory function and total memory
# ---------------------------------------------------------------------------

def _factor(xx: np.ndarray, reg: float):
    a = xx if reg == 0.0 else xx + reg * np.eye(xx.shape[0])
    try:
        return scipy.linalg.cho_factor(a)
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(
            f"covariance solve failed (reg={reg:g}): {exc}") from exc


def memory_function(xx: np.ndarray, xy: np.ndarray, input_var: float = 1.0,
                    reg: float = 0.0) -> float:
    """m(tau) = xy^T (XX + reg I)^{-1} xy / input_var, a squared correlation."""
    factor = _factor(xx, reg)
    m = float(xy @ scipy.linalg.cho_solve(factor, xy)) / input_var
    if m < -IMAG_TOL or m > 1.0 + 1e-6:
        raise NumericalError(f"memory value {m:.6g} outside [0, 1]")
    return max(m, 0.0)


def total_memory(
    net: Network,
    alpha: float | None = None,
    tau_max: int = 200,
    reg: float = 0.0,
    tail_tol: float = 1e-6,
    cap: int = 100_000,
) -> MemoryCurve:
    """Summation-backend memory curve and total memory.

    ``alpha`` selects exponentially correlated unit-variance input; None means
    i.i.d. unit-variance input. The lag range starts at tau_max and is
    extended until m(tau) stays below tail_tol (error if the cap is hit
    first, which signals a spectral radius too close to one).
    """
    xx = (state_covariance_iid(net) if alpha is None
          else state_covariance_expcorr(net, alpha))
    factor = _factor(xx, reg)

    def batch(lo: int, hi: int) -> np.ndarray:
        if alpha is None:
            xys = _delay_covariance_iid_batch(net, hi)[:, lo:]
        else:
            xys = _delay_covariance_expcorr_batch(net, alpha, hi)[:, lo:]
        sol = scipy.linalg.cho_solve(factor, xys)
        return np.einsum("ij,ij->j", xys, sol)

    hi = max(tau_max, 8)
    m = batch(0, hi)
    guard = 5  # consecutive sub-threshold values required to stop
    while not np.all(m[-guard:] < tail_tol):
        if hi >= cap:
            raise NumericalError(
                f"memory tail has not decayed below {tail_tol:g} by tau={cap}")
        lo, hi = hi + 1, min(2 * hi, cap)
        m = np.concatenate([m, batch(lo, hi)])
    bad = float(np.min(m))
    if bad < -IMAG_TOL:
        raise NumericalError(f"negative memory value {bad:.3g}")
    m = np.clip(m, 0.0, None)
    if np.max(m) > 1.0 + 1e-6:
        raise NumericalError(f"memory value {np.max(m):.6g} above 1")
    return MemoryCurve(m=m, total=float(m.sum()), normalization=net.n)


# ---------------------------------------------------------------------------
# spectral backend for the memory function
# ---------------------------------------------------------------------------

@dataclass
class SpectralOperators:
    """Eigenbasis integrals behind the spectral memory formulas.

    a is the per-lag cross-covariance vector in the eigenbasis (so the
    outer product a a^T plays the role of the per-tau numerator matrix),
    c is the eigenbasis state covariance, and b accumulates the lag sum for
    total memory. c is complex-symmetric and transforms to a real symmetric
    matrix; both are validated rather than assumed.
    """

    a: np.ndarray | None
    b: np.ndarray | None
    c: np.ndarray
    grid_size: int

    def validate(self, tol: float = 1e-8) -> None:
        sym = float(np.max(np.abs(self.c - self.c.T)))
        scale = float(np.max(np.abs(self.c))) or 1.0
        if sym / scale > tol:
            raise NumericalError(f"eigenbasis covariance asymmetric: {sym:.3g}")


def _density_on(density: SpectralDensity, freqs: np.ndarray) -> np.ndarray:
    if density.func is None:
        raise NumericalError(
            "spectral backend needs a closed-form density to refine the grid")
    return np.asarray(density.func(freqs), dtype=complex)


def _eigenbasis_cross(net: Network, freqs, s_uy_vals, tau: int) -> np.ndarray:
    """a_a = wbar_a (1/2pi) int S_uy(f) e^{-if tau} / (1 - e^{if} d_a) df."""
    eig = get_eig(net)
    wbar = eig.u_inv @ net.w_in.astype(complex)
    phase = np.exp(-1j * freqs * tau) * np.asarray(s_uy_vals, dtype=complex)
    phi = 1.0 / (1.0 - np.outer(eig.d, np.exp(1j * freqs)))
    return wbar * (phi @ phase) / freqs.size


def _eigenbasis_ridge(net: Network, reg: float) -> np.ndarray | float:
    """Eigenbasis image of reg * I: XX + reg I = U (C + reg U^{-1} U^{-T}) U^T."""
    if reg == 0.0:
        return 0.0
    u_inv = get_eig(net).u_inv
    return reg * (u_inv @ u_inv.T)


def memory_function_spectral(
    net: Network,
    s_uu: SpectralDensity,
    s_uy: SpectralDensity,
    tau: int,
    input_var: float = 1.0,
    reg: float = 0.0,
    rel_tol: float = 1e-6,
    max_size: int = 1 << 17,
) -> float:
    """m(tau) from spectral densities alone.

    Computes a^T C^{-1} a in the eigenbasis, which equals the lag-domain
    xy^T XX^{-1} xy exactly; the inverse is the ordinary matrix inverse of C
    (the elementwise reading fails the scalar N=1 identity for N > 1).
    A nonzero reg reproduces the lag-domain ridge exactly.
    """
    ridge = _eigenbasis_ridge(net, reg)

    def assemble(freqs, svals):
        c = _eigenbasis_covariance(net, freqs, svals) + ridge
        a = _eigenbasis_cross(net, freqs, _density_on(s_uy, freqs), tau)
        SpectralOperators(a=a, b=None, c=c, grid_size=freqs.size).validate()
        try:
            z = scipy.linalg.solve(c, a)
        except scipy.linalg.LinAlgError as exc:
            raise NumericalError(f"singular eigenbasis covariance: {exc}") from exc
        return a @ z

    val = _refine_grid(s_uu, assemble, rel_tol, max_size, what="memory spectral")
    m = float(_as_real(np.asarray(val), "memory spectral")) / input_var
    return m


def total_memory_spectral(
    net: Network,
    s_uu: SpectralDensity,
    s_uy: SpectralDensity | None = None,
    reg: float = 0.0,
    rel_tol: float = 1e-4,
    max_size: int = 1 << 13,
    block: int = 256,
) -> float:
    """Total memory from the double frequency integral.

    The lag sum sum_tau e^{-i(f+f')tau} is the distribution
    pi delta(f+f') + PV[1/(1 - e^{-i(f+f')})]. The principal-value part is
    summed on a quarter-cell-offset grid (no node hits the pole); the delta
    ridge contributes the single integral
    (1/4pi) int S_uy(f) S_uy(-f) / ((1-e^{if}d_a)(1-e^{-if}d_b)) df,
    which a pole-avoiding double sum alone would miss entirely.
    """
    if s_uy is None:
        s_uy = s_uu
    eig = get_eig(net)
    wbar = eig.u_inv @ net.w_in.astype(complex)
    ridge = _eigenbasis_ridge(net, reg)

    def assemble(size: int) -> float:
        h = 2.0 * np.pi / size
        freqs = -np.pi + h * (np.arange(size) + 0.25)
        suu = _density_on(s_uu, freqs)
        suy = _density_on(s_uy, freqs)
        suy_neg = _density_on(s_uy, -freqs)
        c = _eigenbasis_covariance(net, freqs, suu) + ridge
        phi = 1.0 / (1.0 - np.outer(eig.d, np.exp(1j * freqs)))   # N x M
        phi_neg = 1.0 / (1.0 - np.outer(eig.d, np.exp(-1j * freqs)))
        psi = phi * suy / size                                    # rows: S_uy/(1-e^{if}d)
        # principal-value double sum, blocked over rows of the pole kernel
        b_pv = np.zeros((net.n, net.n), dtype=complex)
        for lo in range(0, size, block):
            hi = min(lo + block, size)
            kern = 1.0 / (1.0 - np.exp(-1j * (freqs[lo:hi, None] + freqs[None, :])))
            b_pv += psi[:, lo:hi] @ kern @ psi.T
        # delta-ridge correction: half the C-type integral with S_uy(f) S_uy(-f)
        b_delta = 0.5 * (phi * (suy * suy_neg / size)) @ phi_neg.T
        b = np.outer(wbar, wbar) * (b_pv + b_delta)
        SpectralOperators(a=None, b=b, c=c, grid_size=size).validate()
        try:
            total = np.trace(scipy.linalg.solve(c, b))
        except scipy.linalg.LinAlgError as exc:
            raise NumericalError(f"singular eigenbasis covariance: {exc}") from exc
        return total

    size, prev = 1024, None
    while size <= max_size:
        cur = assemble(size)
        if prev is not None and abs(cur - prev) <= rel_tol * max(abs(cur), 1e-30):
            return float(_as_real(np.asarray(cur), "total memory spectral", tol=1e-6))
        prev = cur
        size *= 2
    raise NumericalError(
        f"total memory spectral: no convergence up to {max_size} grid points")
