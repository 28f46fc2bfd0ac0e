"""Config-driven experiment runners with reproducible seeding.

Five experiment families: memory-curve (analytic vs simulated memory
function), memory-vs-alpha (capacity as a function of input correlation),
narma10 and mackey-glass (analytic vs trained readouts with error bounds),
and topology-sweep (performance while a ring is progressively randomized).

Seeding scheme, derived from ``base_seed`` so reruns are bit-identical:
input signals use base_seed + instance (the sweep shares one signal across
instances and uses base_seed directly), input weights use
base_seed + 10000 + instance, link randomization uses
base_seed + 20000 + 1000*ell + instance, and independent test sequences use
base_seed + 30000 + instance.

All second moments feeding a task's analytic readout are estimated over the
training window with full input history (the estimator for lag k multiplies
the window target by inputs k steps earlier, which may precede the window),
so the analytic and trained solutions converge to each other as the window
grows.
"""

import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
import pandas as pd

from . import analytic as an
from .errors import ConfigError
from .readout import (analytic_readout, empirical_readout, markov_bound,
                      mse_analytic)
from .reservoir import (Network, StateTrajectory, randomize_links,
                        ring_network, run_reservoir)
from .signals import empirical_autocorr, gen_expcorr, gen_iid_uniform
from .tasks import MGParams, TaskSpec, mackey_glass, narma10, prediction_pair

EXPERIMENTS = ("memory-curve", "memory-vs-alpha", "narma10", "mackey-glass",
               "topology-sweep")

_COMMON_DEFAULTS = dict(
    n=20,
    lambdas=(0.9,),
    alphas=(0.05,),
    ells=(0,),
    tau_max=40,
    n_samples=30_000,
    washout=5_000,
    reg=1e-9,
    instances=1,
    base_seed=11,
    horizon=10,
    train_frac=2.0 / 3.0,
    independent_test=False,
    full_scale=False,
    out=None,
)

_EXPERIMENT_DEFAULTS = {
    "memory-curve": dict(lambdas=(0.5, 0.7, 0.9)),
    "memory-vs-alpha": dict(alphas=(1.0, 0.5, 0.1, 0.05, 0.02)),
    "narma10": dict(),
    "mackey-glass": dict(),
    "topology-sweep": dict(
        n=30,
        lambdas=(0.3, 0.6, 0.9),
        alphas=(0.01,),
        ells=(0, 1, 2, 5, 14, 33, 80, 190, 450),
        instances=10,
    ),
}

# Appendix-scale sweep: N=100, 50 instances, randomness up to N^2/2 links.
_FULL_SCALE_DEFAULTS = {
    "topology-sweep": dict(
        n=100,
        instances=50,
        ells=(0, 1, 3, 7, 18, 46, 120, 312, 812, 2113, 5000),
    ),
}


@dataclass
class ExperimentConfig:
    experiment: str
    n: int
    lambdas: tuple
    alphas: tuple
    ells: tuple
    tau_max: int
    n_samples: int
    washout: int
    reg: float
    instances: int
    base_seed: int
    horizon: int
    train_frac: float
    independent_test: bool
    full_scale: bool
    out: str | None

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; expected one of "
                f"{', '.join(EXPERIMENTS)}")
        if not self.lambdas:
            raise ConfigError("lambda grid is empty")
        if not self.alphas:
            raise ConfigError("alpha grid is empty")
        if not self.ells:
            raise ConfigError("ell grid is empty")
        for lam in self.lambdas:
            if not 0.0 <= lam < 1.0:
                raise ConfigError(f"lambda={lam} outside [0, 1)")
        for a in self.alphas:
            if a <= 0:
                raise ConfigError(f"alpha={a} must be positive")
        for ell in self.ells:
            if not 0 <= int(ell) <= self.n * self.n:
                raise ConfigError(f"ell={ell} outside [0, n^2]")
        if self.instances < 1:
            raise ConfigError("instances must be at least 1")
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if self.tau_max < 1:
            raise ConfigError("tau_max must be at least 1")
        if not 0 <= self.washout < self.n_samples:
            raise ConfigError(
                f"need 0 <= washout ({self.washout}) < n_samples ({self.n_samples})")
        if self.reg < 0:
            raise ConfigError("reg must be nonnegative")
        if not 0.0 < self.train_frac <= 1.0:
            raise ConfigError("train_frac must be in (0, 1]")
        if self.horizon < 0:
            raise ConfigError("horizon must be nonnegative")


def config_from_dict(doc: dict) -> ExperimentConfig:
    """Build a config from a JSON-style dict, filling experiment defaults."""
    if "experiment" not in doc:
        raise ConfigError("config must name an 'experiment'")
    experiment = doc["experiment"]
    if experiment not in EXPERIMENTS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; expected one of "
            f"{', '.join(EXPERIMENTS)}")
    known = {f.name for f in fields(ExperimentConfig)}
    for key in doc:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
    merged = dict(_COMMON_DEFAULTS)
    merged.update(_EXPERIMENT_DEFAULTS[experiment])
    if doc.get("full_scale"):
        merged.update(_FULL_SCALE_DEFAULTS.get(experiment, {}))
    merged.update({k: v for k, v in doc.items() if k != "experiment"})
    for grid in ("lambdas", "alphas", "ells"):
        merged[grid] = tuple(merged[grid])
    cfg = ExperimentConfig(experiment=experiment, **merged)
    cfg.validate()
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config root in {path} must be a JSON object")
    return config_from_dict(doc)


def save_config(cfg: ExperimentConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(asdict(cfg), fh, indent=2, sort_keys=True)


@dataclass
class ExperimentResult:
    experiment: str
    raw: pd.DataFrame
    aggregate: pd.DataFrame
    report: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# seeding and shared estimators
# ---------------------------------------------------------------------------

def _signal_seed(cfg, instance=0):
    return cfg.base_seed + instance


def _w_in_seed(cfg, instance=0):
    return cfg.base_seed + 10_000 + instance


def _topology_seed(cfg, ell, instance=0):
    return cfg.base_seed + 20_000 + 1_000 * int(ell) + instance


def _test_seed(cfg, instance=0):
    return cfg.base_seed + 30_000 + instance


def _windowed_autocorr(u: np.ndarray, t0: int, t1: int, max_lag: int) -> np.ndarray:
    """<u_t u_{t-k}> over t in [t0, t1) using history before the window."""
    if t0 < max_lag:
        raise ConfigError(
            f"washout/window start {t0} is smaller than the correlation "
            f"horizon {max_lag}; increase washout")
    seg = u[t0:t1]
    span = t1 - t0
    return np.array([u[t0 - k:t1 - k] @ seg / span for k in range(max_lag + 1)])


def _windowed_crosscorr(u: np.ndarray, y: np.ndarray, t0: int, t1: int,
                        max_lag: int) -> np.ndarray:
    """<u_{t-k} y_t> over t in [t0, t1) using input history before the window."""
    if t0 < max_lag:
        raise ConfigError(
            f"washout/window start {t0} is smaller than the correlation "
            f"horizon {max_lag}; increase washout")
    seg = y[t0:t1]
    span = t1 - t0
    return np.array([u[t0 - k:t1 - k] @ seg / span for k in range(max_lag + 1)])


def _build_network(cfg, lam, ell, instance) -> Network:
    net = ring_network(cfg.n, lam, input_seed=_w_in_seed(cfg, instance))
    if ell > 0:
        net = randomize_links(net, int(ell), seed=_topology_seed(cfg, ell, instance),
                              rescale=True)
    return net


def _empirical_memory_curve(net, u_arr, washout, taus, reg) -> np.ndarray:
    """Sample-moment memory estimates for all requested lags at once."""
    import scipy.linalg

    traj = run_reservoir(net, u_arr, washout)
    s = traj.states
    t = s.shape[1]
    xx = s @ s.T / t
    targets = np.stack([u_arr[washout - tau:u_arr.size - tau] for tau in taus],
                       axis=1)
    xy = s @ targets / t
    sol = scipy.linalg.cho_solve(
        scipy.linalg.cho_factor(xx + reg * np.eye(net.n)), xy)
    power = (targets * targets).mean(axis=0)
    return np.einsum("ij,ij->j", xy, sol) / power


# ---------------------------------------------------------------------------
# experiment runners
# ---------------------------------------------------------------------------

def run_memory_curve(cfg: ExperimentConfig) -> ExperimentResult:
    """Analytic vs simulated memory function per spectral radius."""
    alpha = cfg.alphas[0]
    taus = np.arange(cfg.tau_max)
    if cfg.tau_max > cfg.washout:
        raise ConfigError("tau_max must not exceed the washout")
    rows = []
    for lam in cfg.lambdas:
        for inst in range(cfg.instances):
            net = _build_network(cfg, lam, cfg.ells[0], inst)
            curve = an.total_memory(net, alpha=alpha, tau_max=cfg.tau_max,
                                    reg=cfg.reg)
            u = gen_expcorr(cfg.n_samples, alpha, seed=_signal_seed(cfg, inst))
            m_emp = _empirical_memory_curve(net, u.samples, cfg.washout, taus,
                                            cfg.reg)
            for tau in taus:
                rows.append(dict(lam=lam, instance=inst, tau=int(tau),
                                 m_analytic=curve.m[tau],
                                 m_empirical=m_emp[tau]))
    raw = pd.DataFrame(rows)
    aggregate = (raw.groupby(["lam", "tau"])
                 .agg(m_analytic_mean=("m_analytic", "mean"),
                      m_analytic_std=("m_analytic", "std"),
                      m_empirical_mean=("m_empirical", "mean"),
                      m_empirical_std=("m_empirical", "std"))
                 .reset_index())
    diffs = (raw.assign(diff=(raw.m_analytic - raw.m_empirical).abs())
             .groupby("lam")["diff"].max())
    report = {
        "task": asdict(TaskSpec("delay", {"tau": int(taus[-1])})),
        "alpha": alpha,
        "max_abs_diff_per_lambda": {str(k): float(v) for k, v in diffs.items()},
    }
    return ExperimentResult("memory-curve", raw, aggregate, report)


def run_memory_vs_alpha(cfg: ExperimentConfig) -> ExperimentResult:
    """Total memory (normalized by N) across input correlation strengths."""
    rows = []
    for lam in cfg.lambdas:
        for alpha in cfg.alphas:
            for inst in range(cfg.instances):
                net = _build_network(cfg, lam, cfg.ells[0], inst)
                curve = an.total_memory(net, alpha=alpha, tau_max=cfg.tau_max,
                                        reg=cfg.reg)
                rows.append(dict(lam=lam, alpha=alpha, instance=inst,
                                 total=curve.total,
                                 total_per_n=curve.total / cfg.n))
    raw = pd.DataFrame(rows)
    aggregate = (raw.groupby(["lam", "alpha"])
                 .agg(total_mean=("total", "mean"), total_std=("total", "std"),
                      total_per_n_mean=("total_per_n", "mean"))
                 .reset_index())
    monotone = {}
    for lam in cfg.lambdas:
        sub = (aggregate[aggregate.lam == lam]
               .sort_values("alpha", ascending=False))
        totals = sub.total_mean.to_numpy()
        monotone[str(lam)] = bool(np.all(np.diff(totals) > 0)) if totals.size > 1 else True
    report = {"monotone_increase_as_alpha_decreases": monotone}
    return ExperimentResult("memory-vs-alpha", raw, aggregate, report)


def _supervised_instance(cfg, lam, inst, u_arr, y_arr, horizon_shift,
                         test_pair=None):
    """Train analytic and empirical readouts on one task instance.

    Returns per-instance metrics, the Markov table for the analytic readout,
    and the test traces. ``test_pair`` (u, y) switches evaluation to an
    independently generated sequence instead of the tail of the same run.
    """
    net = _build_network(cfg, lam, cfg.ells[0], inst)
    kmax = an.truncation_k_max(net)
    max_lag = kmax + horizon_shift
    traj = run_reservoir(net, u_arr, cfg.washout)
    s = traj.states
    n_tr = max(1, int(s.shape[1] * cfg.train_frac))
    tr0, tr1 = cfg.washout, cfg.washout + n_tr

    r_uu = _windowed_autocorr(u_arr, tr0, tr1, max_lag)
    xx = an.state_covariance_sum(net, r_uu, k_max=kmax)
    if horizon_shift == 0:
        r_xy = _windowed_crosscorr(u_arr, y_arr, tr0, tr1, max_lag)
    else:
        r_xy = r_uu  # predicting the input series itself, h steps ahead
    xy = an.cross_covariance_from_corr(net, r_xy, horizon_shift=horizon_shift,
                                       k_max=kmax)
    ro_analytic = analytic_readout(xx, xy, cfg.reg)
    ro_trained = empirical_readout(StateTrajectory(s[:, :n_tr], cfg.washout),
                                   y_arr[tr0:tr1], cfg.reg)
    mse_expected = mse_analytic(float(np.mean(y_arr[tr0:tr1] ** 2)), xx, xy,
                                cfg.reg)

    if test_pair is None:
        if n_tr >= s.shape[1]:
            raise ConfigError("train_frac leaves no test segment")
        s_te = s[:, n_tr:]
        y_te = y_arr[tr1:]
        t_index = np.arange(tr1, tr1 + y_te.size)
    else:
        u_te_arr, y_te_full = test_pair
        s_te = run_reservoir(net, u_te_arr, cfg.washout).states
        y_te = y_te_full[cfg.washout:]
        t_index = np.arange(cfg.washout, cfg.washout + y_te.size)

    pred_a = ro_analytic.psi @ s_te
    pred_t = ro_trained.psi @ s_te
    power = float(np.mean(y_te ** 2))
    nmse_a = float(np.mean((pred_a - y_te) ** 2)) / power
    nmse_t = float(np.mean((pred_t - y_te) ** 2)) / power

    if mse_expected > 0:
        center = np.log10(mse_expected)
        a_grid = np.logspace(center - 1.5, center + 2.5, 20)
    else:
        a_grid = np.logspace(-12, -4, 20)
    err2 = (pred_a - y_te) ** 2
    markov = [dict(lam=lam, instance=inst, a=float(a), bound=float(b),
                   empirical=float(np.mean(err2 >= a)))
              for a, b in markov_bound(mse_expected, a_grid).items()]

    metrics = dict(lam=lam, instance=inst, nmse_analytic=nmse_a,
                   nmse_trained=nmse_t, mse_expected=mse_expected,
                   test_target_power=power, n_test=int(y_te.size))
    traces = pd.DataFrame(dict(lam=lam, instance=inst, t=t_index,
                               target=y_te, y_analytic=pred_a,
                               y_trained=pred_t))
    return metrics, markov, traces


def _metrics_aggregate(metrics: pd.DataFrame) -> pd.DataFrame:
    return (metrics.groupby("lam")
            .agg(nmse_analytic_mean=("nmse_analytic", "mean"),
                 nmse_analytic_std=("nmse_analytic", "std"),
                 nmse_trained_mean=("nmse_trained", "mean"),
                 nmse_trained_std=("nmse_trained", "std"),
                 mse_expected_mean=("mse_expected", "mean"))
            .reset_index())


def run_narma10(cfg: ExperimentConfig) -> ExperimentResult:
    all_metrics, all_markov, all_traces = [], [], []
    for lam in cfg.lambdas:
        for inst in range(cfg.instances):
            u = gen_iid_uniform(cfg.n_samples, 0.0, 0.5,
                                seed=_signal_seed(cfg, inst))
            y = narma10(u)
            test_pair = None
            if cfg.independent_test:
                u2 = gen_iid_uniform(cfg.n_samples, 0.0, 0.5,
                                     seed=_test_seed(cfg, inst))
                test_pair = (u2.samples, narma10(u2).samples)
            metrics, markov, traces = _supervised_instance(
                cfg, lam, inst, u.samples, y.samples, horizon_shift=0,
                test_pair=test_pair)
            all_metrics.append(metrics)
            all_markov.extend(markov)
            all_traces.append(traces)
    raw = pd.concat(all_traces, ignore_index=True)
    metrics = pd.DataFrame(all_metrics)
    report = {
        "task": asdict(TaskSpec("narma10")),
        "metrics": metrics.to_dict(orient="records"),
        "markov": all_markov,
    }
    return ExperimentResult("narma10", raw, _metrics_aggregate(metrics), report)


def run_mackey_glass(cfg: ExperimentConfig) -> ExperimentResult:
    params = MGParams()
    n_series = cfg.n_samples + cfg.horizon
    if cfg.independent_test:
        n_series += cfg.n_samples
    series = mackey_glass(params, n_series, history=0.5, discard=100)
    u, tgt = prediction_pair(series, cfg.horizon)
    u_train, y_train = u.samples[:cfg.n_samples], tgt.samples[:cfg.n_samples]
    test_pair = None
    if cfg.independent_test:
        # disjoint later block of the same deterministic trajectory
        test_pair = (u.samples[cfg.n_samples:], tgt.samples[cfg.n_samples:])

    all_metrics, all_markov, all_traces = [], [], []
    for lam in cfg.lambdas:
        for inst in range(cfg.instances):
            metrics, markov, traces = _supervised_instance(
                cfg, lam, inst, u_train, y_train,
                horizon_shift=cfg.horizon, test_pair=test_pair)
            all_metrics.append(metrics)
            all_markov.extend(markov)
            all_traces.append(traces)
    raw = pd.concat(all_traces, ignore_index=True)
    metrics = pd.DataFrame(all_metrics)
    autocorr = empirical_autocorr(u_train, min(200, cfg.n_samples - 1))
    report = {
        "task": asdict(TaskSpec("mackey_glass", {"params": asdict(params)},
                                horizon=cfg.horizon)),
        "metrics": metrics.to_dict(orient="records"),
        "markov": all_markov,
        "autocorrelation": {
            "lags": list(range(autocorr.values.size)),
            "values": autocorr.values.tolist(),
        },
    }
    return ExperimentResult("mackey-glass", raw, _metrics_aggregate(metrics),
                            report)


def run_topology_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    """Memory and task errors while ring links are progressively randomized.

    Task input statistics are shared across instances (instances differ in
    input weights and link noise, which is what the averaging is for).
    Task errors carry both the analytic expected NMSE and, at desk scale,
    an empirically trained-and-tested NMSE; total memory is analytic.
    """
    alpha = cfg.alphas[0]
    u_n = gen_iid_uniform(cfg.n_samples, 0.0, 0.5, seed=_signal_seed(cfg))
    y_n = narma10(u_n)
    series = mackey_glass(MGParams(), cfg.n_samples + cfg.horizon,
                          history=0.5, discard=100)
    u_m, t_m = prediction_pair(series, cfg.horizon)

    k_global = an.truncation_k_max(ring_network(1, max(cfg.lambdas)))
    t0, t1 = cfg.washout, cfg.n_samples
    r_uu_n = _windowed_autocorr(u_n.samples, t0, t1, k_global)
    r_uy_n = _windowed_crosscorr(u_n.samples, y_n.samples, t0, t1, k_global)
    r_uu_m = _windowed_autocorr(u_m.samples, t0, len(u_m),
                                k_global + cfg.horizon)
    with_empirical = not cfg.full_scale

    rows = []
    for lam in cfg.lambdas:
        for ell in cfg.ells:
            for inst in range(cfg.instances):
                net = _build_network(cfg, lam, ell, inst)
                seed = _topology_seed(cfg, ell, inst) if ell else _w_in_seed(cfg, inst)
                k_net = an.truncation_k_max(net)
                base = dict(lam=lam, ell=int(ell), instance=inst,
                            instance_seed=seed)

                curve = an.total_memory(net, alpha=alpha, tau_max=cfg.tau_max,
                                        reg=cfg.reg)
                rows.append(base | dict(metric="memory_per_n",
                                        analytic=curve.total / cfg.n,
                                        empirical=np.nan))

                nmse_n, emp_n = _sweep_task_error(
                    cfg, net, k_net, u_n.samples, y_n.samples, r_uu_n, r_uy_n, 0,
                    with_empirical)
                rows.append(base | dict(metric="narma10_nmse",
                                        analytic=nmse_n, empirical=emp_n))

                nmse_m, emp_m = _sweep_task_error(
                    cfg, net, k_net, u_m.samples, t_m.samples, r_uu_m, r_uu_m,
                    cfg.horizon, with_empirical)
                rows.append(base | dict(metric="mackey_glass_nmse",
                                        analytic=nmse_m, empirical=emp_m))
    raw = pd.DataFrame(rows)
    aggregate = (raw.groupby(["lam", "ell", "metric"])
                 .agg(analytic_mean=("analytic", "mean"),
                      analytic_std=("analytic", "std"),
                      empirical_mean=("empirical", "mean"),
                      empirical_std=("empirical", "std"))
                 .reset_index())
    narma = aggregate[aggregate.metric == "narma10_nmse"]
    best_ell, slight_hurts = {}, {}
    for lam in cfg.lambdas:
        sub = narma[narma.lam == lam].sort_values("ell")
        best_ell[str(lam)] = int(sub.loc[sub.analytic_mean.idxmin(), "ell"])
        nonzero = sub[sub.ell > 0]
        if len(nonzero) and len(sub[sub.ell == 0]):
            e0 = float(sub[sub.ell == 0].analytic_mean.iloc[0])
            e1 = float(nonzero.analytic_mean.iloc[0])
            slight_hurts[str(lam)] = bool(e1 > e0)
    report = {
        "alpha": alpha,
        "narma_best_ell_per_lambda": best_ell,
        "narma_slight_randomness_hurts": slight_hurts,
        "empirical_columns": with_empirical,
    }
    return ExperimentResult("topology-sweep", raw, aggregate, report)


def _sweep_task_error(cfg, net, k_max, u_arr, y_arr, r_uu, r_xy, shift,
                      with_empirical):
    xx = an.state_covariance_sum(net, r_uu, k_max=k_max)
    xy = an.cross_covariance_from_corr(net, r_xy, horizon_shift=shift,
                                       k_max=k_max)
    power_train = float(np.mean(y_arr[cfg.washout:] ** 2))
    nmse = mse_analytic(power_train, xx, xy, cfg.reg) / power_train
    empirical = np.nan
    if with_empirical:
        traj = run_reservoir(net, u_arr, cfg.washout)
        s = traj.states
        n_tr = int(s.shape[1] * cfg.train_frac)
        y_post = y_arr[cfg.washout:]
        ro = empirical_readout(StateTrajectory(s[:, :n_tr], cfg.washout),
                               y_post[:n_tr], cfg.reg)
        pred = ro.psi @ s[:, n_tr:]
        y_te = y_post[n_tr:]
        empirical = float(np.mean((pred - y_te) ** 2) / np.mean(y_te ** 2))
    return nmse, empirical


_RUNNERS = {
    "memory-curve": run_memory_curve,
    "memory-vs-alpha": run_memory_vs_alpha,
    "narma10": run_narma10,
    "mackey-glass": run_mackey_glass,
    "topology-sweep": run_topology_sweep,
}


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    cfg.validate()
    return _RUNNERS[cfg.experiment](cfg)


# ---------------------------------------------------------------------------
# output files
# ---------------------------------------------------------------------------

SCHEMA_VERSION = 1


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and np.isnan(obj):
        return None
    return obj


def write_outputs(result: ExperimentResult, out_dir,
                  cfg: ExperimentConfig | None = None) -> dict:
    """Write raw.csv, aggregate.csv, and report.json under <out>/<experiment>.

    Outputs are byte-deterministic for a fixed config; the config echoed in
    the report omits the output path so results written to different
    directories stay comparable.
    """
    target = Path(out_dir) / result.experiment
    target.mkdir(parents=True, exist_ok=True)
    paths = {}
    for name, frame in (("raw", result.raw), ("aggregate", result.aggregate)):
        path = target / f"{name}.csv"
        with open(path, "w") as fh:
            fh.write(f"# schema: rca.{result.experiment}.{name}.v{SCHEMA_VERSION}\n")
            frame.to_csv(fh, index=False)
        paths[name] = path
    report = {
        "schema": f"rca.{result.experiment}.report.v{SCHEMA_VERSION}",
        **_jsonable(result.report),
    }
    if cfg is not None:
        echo = asdict(cfg)
        echo.pop("out", None)
        report["config"] = _jsonable(echo)
    path = target / "report.json"
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths["report"] = path
    return paths
