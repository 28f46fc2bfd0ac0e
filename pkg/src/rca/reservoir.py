"""Linear recurrent networks: construction, randomization, and simulation.

Networks follow the linear echo-state update x_{t+1} = W x_t + w_in * u_t
with spectral radius below one. Construction starts from a uniform-weight
ring; ``randomize_links`` replaces a chosen number of entries with standard
normal draws to interpolate between the regular ring and a random matrix.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DefectiveMatrixError
from .signals import _as_samples

# eigenvector condition number above which a matrix is treated as defective
COND_GUARD = 1e12


@dataclass
class EigenCache:
    """Cached eigendecomposition W = U diag(d) U^{-1} (complex)."""

    u: np.ndarray
    d: np.ndarray
    u_inv: np.ndarray
    cond: float


@dataclass
class Network:
    """Recurrent weight matrix, input weights, and cached spectral data.

    ``spectral_radius`` records the radius the construction guarantees;
    ``seed`` and ``ell`` describe how the topology was randomized (if at all).
    """

    w: np.ndarray
    w_in: np.ndarray
    spectral_radius: float
    seed: int | None = None
    ell: int = 0
    _eig: EigenCache | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float)
        self.w_in = np.asarray(self.w_in, dtype=float)
        if self.w.ndim != 2 or self.w.shape[0] != self.w.shape[1]:
            raise ValueError("W must be square")
        if self.w_in.shape != (self.w.shape[0],):
            raise ValueError("w_in must be an N-vector matching W")

    @property
    def n(self) -> int:
        return self.w.shape[0]


@dataclass
class StateTrajectory:
    """States collected after the washout period.

    Column t holds the state reached after consuming inputs u_0..u_{washout+t},
    so the target aligned with column t is the task output for time index
    washout+t.
    """

    states: np.ndarray
    washout: int

    @property
    def n_steps(self) -> int:
        return self.states.shape[1]


def spectral_radius(w: np.ndarray) -> float:
    """Largest eigenvalue magnitude."""
    w = np.asarray(w, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("matrix must be square")
    return float(np.max(np.abs(np.linalg.eigvals(w))))


def input_weights(n: int, seed: int, scale: float = 0.1) -> np.ndarray:
    """Random sign vector scaled by ``scale`` (entries +-scale, equiprobable)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    return scale * (2.0 * rng.integers(0, 2, n) - 1.0)


def ring_network(n: int, lam: float, input_seed: int = 0, input_scale: float = 0.1) -> Network:
    """Directed ring with identical weights and spectral radius exactly lam.

    lam = 0 is allowed as the degenerate memoryless network (W = 0); the
    stable range is otherwise 0 < lam < 1.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 <= lam < 1.0:
        raise ValueError(f"lambda={lam} outside [0, 1)")
    w = np.zeros((n, n))
    if lam > 0.0:
        for i in range(n):
            w[i, (i - 1) % n] = lam
    return Network(w=w, w_in=input_weights(n, input_seed, input_scale),
                   spectral_radius=lam)


def randomize_links(net: Network, ell: int, seed: int, rescale: bool = True) -> Network:
    """Replace ell distinct entries of W with fresh N(0,1) draws.

    Positions are drawn uniformly without replacement over all N^2 entries.
    With ``rescale`` the perturbed matrix is scaled back to the network's
    original spectral radius; without it the actual radius is recorded and
    stability is not guaranteed. Returns a new network (eigen cache dropped).
    """
    n2 = net.n * net.n
    if not 0 <= ell <= n2:
        raise ValueError(f"ell={ell} outside [0, {n2}]")
    w = net.w.copy()
    if ell > 0:
        rng = np.random.default_rng(seed)
        idx = rng.choice(n2, size=ell, replace=False)
        w.flat[idx] = rng.standard_normal(ell)
    radius = net.spectral_radius
    if ell > 0:
        actual = spectral_radius(w)
        if rescale:
            if actual == 0.0:
                raise DefectiveMatrixError(
                    "perturbed matrix has zero spectral radius; cannot rescale")
            w *= net.spectral_radius / actual
        else:
            radius = actual
    return Network(w=w, w_in=net.w_in.copy(), spectral_radius=radius,
                   seed=seed, ell=ell)


def run_reservoir(net: Network, u, washout: int) -> StateTrajectory:
    """Drive the network from x_0 = 0 and keep states after the washout."""
    arr = _as_samples(u)
    if washout >= arr.size:
        raise ValueError(f"washout={washout} must be < input length {arr.size}")
    n, t_total = net.n, arr.size
    states = np.empty((n, t_total))
    x = np.zeros(n)
    w, w_in = net.w, net.w_in
    for t in range(t_total):
        x = w @ x + w_in * arr[t]
        states[:, t] = x
    return StateTrajectory(states=states[:, washout:], washout=washout)


def eig_decompose(net: Network) -> Network:
    """Populate the eigendecomposition cache; raises on defective matrices."""
    if net._eig is not None:
        return net
    d, u = np.linalg.eig(net.w)
    cond = float(np.linalg.cond(u))
    if not np.isfinite(cond) or cond > COND_GUARD:
        raise DefectiveMatrixError(
            f"eigenvector condition number {cond:.3g} exceeds {COND_GUARD:.0e}; "
            "use the truncated-sum backend")
    u_inv = np.linalg.inv(u)
    recon_err = float(np.max(np.abs(u @ np.diag(d) @ u_inv - net.w)))
    if recon_err > 1e-8:
        raise DefectiveMatrixError(
            f"eigendecomposition reconstruction error {recon_err:.3g} > 1e-8")
    net._eig = EigenCache(u=u, d=d, u_inv=u_inv, cond=cond)
    return net


def get_eig(net: Network) -> EigenCache:
    """Eigendecomposition of the network, computing it on first use."""
    if net._eig is None:
        eig_decompose(net)
    return net._eig


def network_to_json(net: Network, path=None) -> str:
    """Serialize to the {n, lambda, seed, ell, w, w_in} document."""
    doc = {
        "n": net.n,
        "lambda": net.spectral_radius,
        "seed": net.seed,
        "ell": net.ell,
        "w": net.w.ravel().tolist(),
        "w_in": net.w_in.tolist(),
    }
    text = json.dumps(doc, sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def network_from_json(source) -> Network:
    """Inverse of network_to_json; accepts a JSON string or a file path."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        doc = json.loads(source)
    else:
        with open(source) as fh:
            doc = json.load(fh)
    n = int(doc["n"])
    return Network(
        w=np.asarray(doc["w"], dtype=float).reshape(n, n),
        w_in=np.asarray(doc["w_in"], dtype=float),
        spectral_radius=float(doc["lambda"]),
        seed=doc.get("seed"),
        ell=int(doc.get("ell", 0)),
    )


__all__ = [
    "Network", "StateTrajectory", "EigenCache", "spectral_radius",
    "input_weights", "ring_network", "randomize_links", "run_reservoir",
    "eig_decompose", "get_eig", "network_to_json", "network_from_json",
]
