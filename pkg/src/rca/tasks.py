"""Benchmark targets: delayed reconstruction, NARMA10, and Mackey-Glass.

Alignment convention: target index t pairs with the reservoir state reached
after consuming input u_t, so a task target array can be sliced with the same
washout as the state trajectory.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError, NumericalError
from .signals import Signal, _as_samples, standardize

NARMA_DIVERGENCE_LIMIT = 1e3


@dataclass(frozen=True)
class MGParams:
    """Mackey-Glass system and integration parameters.

    The defaults are the chaotic operating point beta=2, gamma=1,
    n_exp=9.7451, tau_delay=2 integrated at dt=0.05 with one emitted sample
    per unit time. dt=0.05 keeps the step-halving difference of the emitted
    series under 1e-4 RMS over a 100-unit window despite chaotic error
    amplification; dt=0.1 lands near 8e-4.
    """

    beta: float = 2.0
    gamma: float = 1.0
    n_exp: float = 9.7451
    tau_delay: float = 2.0
    dt: float = 0.05
    subsample: int = 20

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.subsample < 1:
            raise ValueError("subsample must be at least 1")
        ratio = self.tau_delay / self.dt
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError(
                f"tau_delay/dt = {ratio} must be an integer for the delay buffer")

    @property
    def delay_steps(self) -> int:
        return round(self.tau_delay / self.dt)


@dataclass(frozen=True)
class TaskSpec:
    """Declarative description of a benchmark target.

    kind is one of "delay", "narma10", "mackey_glass"; params carries the
    kind-specific parameters (tau for delay, the recursion coefficients for
    narma10, an MGParams plus horizon for mackey_glass).
    """

    kind: str
    params: dict = field(default_factory=dict)
    horizon: int = 0

    def __post_init__(self):
        if self.kind == "delay":
            if self.params.get("tau", 0) < 0:
                raise ValueError("delay task needs tau >= 0")
        elif self.kind == "narma10":
            pass  # coefficient defaults live in narma10()
        elif self.kind == "mackey_glass":
            if self.horizon < 1:
                raise ValueError("mackey_glass task needs horizon >= 1")
        else:
            raise ValueError(f"unknown task kind {self.kind!r}")


def delay_target(u, tau: int) -> Signal:
    """Target y_t = u_{t-tau}; the first tau entries are invalid.

    Invalid leading entries are zero-filled and recorded in
    meta["valid_from"]; regression windows must start at or after that index
    (a washout >= tau does this automatically).
    """
    arr = _as_samples(u)
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    if tau >= arr.size:
        raise ValueError(f"tau={tau} must be < signal length {arr.size}")
    out = np.zeros_like(arr)
    if tau == 0:
        out[:] = arr
    else:
        out[tau:] = arr[:-tau]
    return Signal(out, meta={"generator": "delay", "tau": tau, "valid_from": tau})


def narma10(
    u,
    alpha: float = 0.3,
    beta: float = 0.05,
    gamma: float = 1.5,
    delta: float = 0.1,
    order: int = 10,
) -> Signal:
    """Order-10 NARMA recursion driven by u (safe for u in [0, 0.5]).

    y_t = alpha y_{t-1} + beta y_{t-1} sum_{i=1..order} y_{t-i}
          + gamma u_{t-order} u_{t-1} + delta,

    with zero initial history for both y and u. Raises DivergenceError when
    the recursion leaves [-1e3, 1e3], which signals out-of-range input.
    """
    arr = _as_samples(u)
    n = arr.size
    y = np.zeros(n)
    for t in range(n):
        y_prev = y[t - 1] if t >= 1 else 0.0
        window = y[max(t - order, 0): t].sum()
        u_old = arr[t - order] if t >= order else 0.0
        u_prev = arr[t - 1] if t >= 1 else 0.0
        val = alpha * y_prev + beta * y_prev * window + gamma * u_old * u_prev + delta
        if not np.isfinite(val) or abs(val) > NARMA_DIVERGENCE_LIMIT:
            raise DivergenceError(
                f"NARMA10 diverged at step {t} (|y| > {NARMA_DIVERGENCE_LIMIT:g}); "
                "input out of the stable range")
        y[t] = val
    return Signal(y, meta={"generator": "narma10", "order": order,
                           "coefficients": (alpha, beta, gamma, delta)})


def _mg_deriv(x, x_delayed, p: MGParams):
    return p.beta * x_delayed / (1.0 + x_delayed ** p.n_exp) - p.gamma * x


def mackey_glass(
    params: MGParams,
    n_out: int,
    history: float = 0.5,
    discard: int = 100,
    do_standardize: bool = True,
) -> Signal:
    """Integrate the Mackey-Glass delay differential equation.

    Fourth-order Runge-Kutta with the delayed value read from the stored
    trajectory; the half-step delayed value is cubic-Hermite interpolated
    from the bracketing grid values and their derivatives, which keeps the
    step-halving self-consistency of the emitted series at the 1e-6 level.
    The constant initial ``history`` fills [-tau_delay, 0]; ``discard``
    emitted samples of transient are dropped; the result is deterministic.
    """
    if n_out <= 0:
        raise ValueError("n_out must be positive")
    if history <= 0:
        raise ValueError("initial history must be positive")
    if discard < 0:
        raise ValueError("discard must be nonnegative")
    p = params
    ds = p.delay_steps
    steps = (discard + n_out) * p.subsample
    x = np.empty(steps + ds + 1)
    x[: ds + 1] = history  # grid times -tau_delay .. 0
    dt = p.dt
    for i in range(steps):
        cur = x[ds + i]
        d0, d1 = x[i], x[i + 1]
        f0, f1 = _mg_deriv(d0, x[max(i - ds, 0)], p), _mg_deriv(d1, x[max(i + 1 - ds, 0)], p)
        # Hermite midpoint of the delayed trajectory on [t-tau, t-tau+dt]
        d_mid = 0.5 * (d0 + d1) + 0.125 * dt * (f0 - f1)
        k1 = _mg_deriv(cur, d0, p)
        k2 = _mg_deriv(cur + 0.5 * dt * k1, d_mid, p)
        k3 = _mg_deriv(cur + 0.5 * dt * k2, d_mid, p)
        k4 = _mg_deriv(cur + dt * k3, d1, p)
        nxt = cur + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        if not np.isfinite(nxt) or nxt < 0.0:
            raise NumericalError(f"Mackey-Glass integration failed at step {i}")
        x[ds + i + 1] = nxt
    emitted = x[ds::p.subsample][discard: discard + n_out]
    sig = Signal(emitted, meta={"generator": "mackey_glass", "history": history,
                                "discard": discard, "params": p})
    if do_standardize:
        sig = standardize(sig)
        sig.meta.update({"generator": "mackey_glass", "history": history,
                         "discard": discard, "params": p})
    return sig


def prediction_pair(series, horizon: int) -> tuple[Signal, Signal]:
    """(input, target) with target_t = series_{t+horizon}.

    The last ``horizon`` samples are trimmed so the pair stays aligned.
    """
    arr = _as_samples(series)
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if horizon >= arr.size:
        raise ValueError(f"horizon={horizon} must be < series length {arr.size}")
    if horizon == 0:
        inp, tgt = arr.copy(), arr.copy()
    else:
        inp, tgt = arr[:-horizon], arr[horizon:]
    meta = dict(getattr(series, "meta", {}))
    return (Signal(inp, meta={**meta, "role": "input"}),
            Signal(tgt, meta={**meta, "role": "target", "horizon": horizon}))
