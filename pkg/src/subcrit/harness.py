"""Scenario orchestration: Monte Carlo probes, classifier agreement, selftest.

A scenario JSON names one process plus classifier and probe budgets:

    {"process": {"kind": "ar"},
     "ensemble": {"dim": 1, "atoms": [{"matrix": [[0.5]], "p": 1.0}]},
     "innovation": {"kind": "log_pareto", "beta": 1.0, "p": 2.0},
     "classifier": {"y_grid": [1.0, 10.0], "n_max": 1000000, "tau": 0.05},
     "probe": {"b_grid": [1, 10, 100], "horizon": 100000, "replicas": 200,
               "seed": 7}}

The probe gathers empirical visit counts #{n <= N: ||V_n|| <= b} per
replica and a divergence fraction (replicas whose running minimum over
the last time decade already exceeds every threshold), then labels the
evidence recurrent-like / transient-like / ambiguous.  `agreement`
cross-checks that label against the analytic verdict.  `selftest` runs
the whole invariant battery and is wired to a nonzero exit code in the
CLI.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import classify, matrix_env, processes
from .classify import Verdict
from .dist import InnovationLaw, law_from_json
from .errors import (
    BudgetExceeded,
    ConfigError,
    PopulationOverflow,
    SubcritError,
    ZeroAnchor,
)
from .matrix_env import MatrixEnsemble
from .processes import (
    CookieWalkConfig,
    FrogConfig,
    OffspringModel,
    simulate_ar,
    simulate_branching,
    simulate_cookie_walk,
    simulate_exchange,
    simulate_frog,
)
from .streams import child_rng

RECURRENT_LIKE = "recurrent_like"
TRANSIENT_LIKE = "transient_like"
AMBIGUOUS = "ambiguous"

_AUX_STREAM = 2**31  # reserved spawn index; replica indices stay far below
_DEFAULT_PROBE_BUDGET = 50_000_000
_GROWTH_SLOPE_MIN = 0.2
_GROWTH_R2_MIN = 0.5
_DIVERGENCE_FRACTION = 0.99

PROCESS_KINDS = ("ar", "max_ar", "branching", "exchange", "frog", "cookie_walk")


# ---------------------------------------------------------------------------
# scenario configuration
# ---------------------------------------------------------------------------


@dataclass
class ClassifierParams:
    y_grid: list[float] | None = None
    n_max: int = classify.DEFAULT_N_MAX
    tau: float = classify.DEFAULT_TAU


@dataclass
class ProbeParams:
    b_grid: list[float] | None = None
    horizon: int = 10_000
    replicas: int = 100
    seed: int = 0
    budget: int = _DEFAULT_PROBE_BUDGET


@dataclass
class Scenario:
    kind: str
    ensemble: MatrixEnsemble | None = None
    innovation: InnovationLaw | None = None
    offspring: OffspringModel | None = None
    t_law: InnovationLaw | None = None
    w_law: InnovationLaw | None = None
    exchange_anchor: float = 0.0
    frog_p: float = 0.0
    frog_r: float = 0.0
    sleep_law: InnovationLaw | None = None
    site_cap: int = 100_000
    wake_cap: int = 100_000
    omega_law: InnovationLaw | None = None
    cookie_law: InnovationLaw | None = None
    classifier: ClassifierParams = field(default_factory=ClassifierParams)
    probe: ProbeParams = field(default_factory=ProbeParams)
    raw: dict = field(default_factory=dict)


def _require(cfg: dict, name: str):
    if name not in cfg:
        raise ConfigError(name, "missing")
    return cfg[name]


def _law(cfg: dict, name: str) -> InnovationLaw:
    try:
        return law_from_json(_require(cfg, name))
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(name, str(exc)) from exc


def parse_scenario(cfg: dict) -> Scenario:
    """Validate a scenario dict; raises ConfigError naming the bad field."""
    if not isinstance(cfg, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    process = _require(cfg, "process")
    if not isinstance(process, dict):
        raise ConfigError("process", "must be an object")
    kind = process.get("kind")
    if kind is None:
        raise ConfigError("process.kind", "missing")
    if kind not in PROCESS_KINDS:
        raise ConfigError("process.kind", f"unknown kind '{kind}'")
    scn = Scenario(kind=kind, raw=cfg)

    if kind in ("ar", "max_ar", "branching"):
        try:
            scn.ensemble = MatrixEnsemble.from_json(_require(cfg, "ensemble"))
        except ConfigError:
            raise
        except (ValueError, TypeError, KeyError, SubcritError) as exc:
            raise ConfigError("ensemble", str(exc)) from exc
        scn.innovation = _law(cfg, "innovation")
        if scn.ensemble.dim > 1 and scn.innovation.dim != scn.ensemble.dim:
            raise ConfigError("innovation", f"needs dim {scn.ensemble.dim} (wrap in scaled_vector)")
        if kind == "branching":
            name = process.get("offspring", "poisson")
            try:
                scn.offspring = OffspringModel(name)
                scn.offspring.validate_ensemble(scn.ensemble)
            except ValueError as exc:
                raise ConfigError("process.offspring", str(exc)) from exc
    elif kind == "exchange":
        scn.t_law = _law(process, "t")
        scn.w_law = _law(process, "w")
        scn.exchange_anchor = float(process.get("y", 0.0))
    elif kind == "frog":
        scn.frog_p = float(_require(process, "p"))
        scn.frog_r = float(_require(process, "r"))
        scn.sleep_law = _law(process, "sleep")
        scn.site_cap = int(process.get("site_cap", 100_000))
        scn.wake_cap = int(process.get("wake_cap", 100_000))
        if not 0.0 < scn.frog_p <= 1.0:
            raise ConfigError("process.p", "must lie in (0, 1]")
        if not 0.0 < scn.frog_r < 1.0:
            raise ConfigError("process.r", "must lie in (0, 1)")
    elif kind == "cookie_walk":
        scn.omega_law = _law(process, "omega")
        scn.cookie_law = _law(process, "cookies")

    cls_cfg = cfg.get("classifier", {})
    if not isinstance(cls_cfg, dict):
        raise ConfigError("classifier", "must be an object")
    scn.classifier = ClassifierParams(
        y_grid=[float(v) for v in cls_cfg["y_grid"]] if "y_grid" in cls_cfg else None,
        n_max=int(cls_cfg.get("n_max", classify.DEFAULT_N_MAX)),
        tau=float(cls_cfg.get("tau", classify.DEFAULT_TAU)),
    )
    probe_cfg = cfg.get("probe", {})
    if not isinstance(probe_cfg, dict):
        raise ConfigError("probe", "must be an object")
    b_grid = None
    if "b_grid" in probe_cfg:
        b_grid = sorted(float(v) for v in probe_cfg["b_grid"])
        if not b_grid or b_grid[0] <= 0.0:
            raise ConfigError("probe.b_grid", "thresholds must be positive")
    scn.probe = ProbeParams(
        b_grid=b_grid,
        horizon=int(probe_cfg.get("horizon", 10_000)),
        replicas=int(probe_cfg.get("replicas", 100)),
        seed=int(probe_cfg.get("seed", 0)),
        budget=int(probe_cfg.get("budget", _DEFAULT_PROBE_BUDGET)),
    )
    if scn.probe.horizon < 10:
        raise ConfigError("probe.horizon", "must be >= 10")
    if scn.probe.replicas < 1:
        raise ConfigError("probe.replicas", "must be >= 1")
    return scn


def load_scenario(path: str) -> Scenario:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"invalid JSON in {path}: {exc}") from exc
    return parse_scenario(cfg)


# ---------------------------------------------------------------------------
# lambda resolution and classification
# ---------------------------------------------------------------------------


def resolve_lambda(
    ensemble: MatrixEnsemble, seed: int, *, n: int = 2000, replicas: int = 200
) -> tuple[float, str, float]:
    """(lambda, source, half_width): spectral for a constant primitive atom,
    Monte Carlo otherwise."""
    if ensemble.is_constant and matrix_env.is_primitive(ensemble.atoms[0]):
        rho = matrix_env.spectral_radius(ensemble.atoms[0])
        if rho <= 0.0:
            raise ValueError("spectral radius 0: chain collapses")
        return -math.log(rho), "spectral", 0.0
    est = matrix_env.estimate_lyapunov(ensemble, n, replicas, seed)
    return est.lambda_hat, "monte_carlo", est.half_width


def innovation_median(law: InnovationLaw, seed: int) -> float:
    rng = child_rng(seed, _AUX_STREAM)
    samples = law.sample(rng, 1001)
    norms = np.abs(samples).max(axis=1) if samples.ndim == 2 else np.abs(samples)
    return float(np.median(norms))


def default_y_grid(law: InnovationLaw, seed: int) -> list[float]:
    base = max(innovation_median(law, seed), 1.0)
    return [base, 10.0 * base, 100.0 * base]


def default_b_grid(law: InnovationLaw | None, seed: int) -> list[float]:
    scale = max(innovation_median(law, seed), 1.0) if law is not None else 1.0
    return [scale, 10.0 * scale, 100.0 * scale]


def classify_scenario(scn: Scenario) -> Verdict:
    """Analytic verdict for the scenario's process."""
    p = scn.classifier
    seed = scn.probe.seed
    if scn.kind in ("ar", "max_ar", "branching"):
        lam, source, hw = resolve_lambda(scn.ensemble, seed)
        if lam <= 0.0:
            raise ConfigError("ensemble", f"lambda = {lam:.6g} <= 0: chain not subcritical")
        y_grid = p.y_grid or default_y_grid(scn.innovation, seed)
        verdict = classify.anchor_scan(
            scn.innovation, lam, y_grid, n_max=p.n_max, tau=p.tau
        )
        verdict.lambda_value = lam
        verdict.lambda_source = source
        verdict.lambda_half_width = hw
        if source == "monte_carlo" and hw > 0.0:
            _flag_lambda_straddle(scn.innovation, lam, hw, y_grid[0], verdict, p)
        return verdict
    if scn.kind == "exchange":
        y = scn.exchange_anchor
        try:
            return classify.exchange_verdict(
                scn.t_law, scn.w_law, y, n_max=p.n_max, tau=p.tau
            )
        except ZeroAnchor:
            bumped = float(scn.w_law._quantile_arr(np.array([0.5]))[0]) + 1.0
            verdict = classify.exchange_verdict(
                scn.t_law, scn.w_law, bumped, n_max=p.n_max, tau=p.tau
            )
            verdict.flags.append(f"anchor_bumped_to_{bumped}")
            return verdict
    if scn.kind == "frog":
        y_grid = p.y_grid or default_y_grid(scn.sleep_law, seed)
        last_err: Exception | None = None
        for y in y_grid:
            try:
                return classify.frog_verdict(
                    scn.frog_p, scn.frog_r, scn.sleep_law, y, n_max=p.n_max, tau=p.tau
                )
            except ZeroAnchor as exc:
                last_err = exc
        raise last_err
    if scn.kind == "cookie_walk":
        y_grid = p.y_grid or [1.0]
        last_err = None
        for y in y_grid:
            try:
                return classify.cookie_verdict(
                    scn.omega_law, scn.cookie_law, y, n_max=p.n_max, tau=p.tau
                )
            except ZeroAnchor as exc:
                last_err = exc
        raise last_err
    raise ConfigError("process.kind", f"unclassifiable kind '{scn.kind}'")


def _flag_lambda_straddle(law, lam, hw, y, verdict, params) -> None:
    outcomes = set()
    for shifted in (lam - hw, lam + hw):
        if shifted <= 0:
            outcomes.add("invalid")
            continue
        try:
            outcomes.add(
                classify.series_verdict(
                    law, shifted, y, n_max=params.n_max, tau=params.tau
                ).outcome
            )
        except ZeroAnchor:
            outcomes.add("invalid")
    if len(outcomes | {verdict.outcome}) > 1:
        verdict.flags.append("lambda_ci_straddles_decision")


# ---------------------------------------------------------------------------
# Monte Carlo probe
# ---------------------------------------------------------------------------


@dataclass
class ProbeReport:
    b_grid: list[float]
    visit_means: list[float]
    visit_counts: np.ndarray | None  # (replicas, len(b_grid))
    divergence_fraction: float
    verdict_hint: str
    growth_slope: float | None
    growth_r2: float | None
    horizon: int
    replicas: int
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "b_grid": list(self.b_grid),
            "visit_means": [float(v) for v in self.visit_means],
            "divergence_fraction": self.divergence_fraction,
            "verdict_hint": self.verdict_hint,
            "growth_slope": self.growth_slope,
            "growth_r2": self.growth_r2,
            "horizon": self.horizon,
            "replicas": self.replicas,
            "extra": {k: v for k, v in sorted(self.extra.items())},
        }


def _scalar_fast_path_ok(scn: Scenario) -> bool:
    return (
        scn.kind in ("ar", "max_ar")
        and scn.ensemble.dim == 1
        and all(float(a[0, 0]) > 0.0 for a in scn.ensemble.atoms)
    )


def _replica_norms(scn: Scenario, horizon: int, rng: np.random.Generator):
    """(values, log_scale) with values[n] = ||V_n|| (or its ln) for n <= N."""
    if scn.kind in ("ar", "max_ar"):
        if _scalar_fast_path_ok(scn):
            ln = processes.scalar_ar_log_norms(
                scn.ensemble, scn.innovation, horizon, rng,
                max_recursion=scn.kind == "max_ar",
            )
            return ln, True
        rec = simulate_ar(
            scn.ensemble, scn.innovation, horizon, rng,
            max_recursion=scn.kind == "max_ar", track_coupling=False,
        )
        return rec.norms, False
    if scn.kind == "branching":
        try:
            rec = simulate_branching(
                scn.ensemble, scn.innovation, horizon, rng, offspring=scn.offspring
            )
            return rec.norms, False
        except PopulationOverflow:
            return np.full(horizon + 1, np.inf), False  # blown-up run: diverged
    if scn.kind == "exchange":
        ws = scn.w_law.sample(rng, horizon + 1)
        ts = scn.t_law.sample(rng, horizon)
        return np.abs(processes.exchange_path(ts, ws)), False
    if scn.kind == "cookie_walk":
        cfg = CookieWalkConfig(scn.omega_law, scn.cookie_law, horizon)
        _, norms = simulate_cookie_walk(cfg, rng, record_norms=True)
        return norms, False
    raise ConfigError("process.kind", f"probe cannot simulate kind '{scn.kind}'")


def _growth_fit(checkpoints: np.ndarray, means: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and R^2 of mean visit count against ln(time)."""
    x = np.log(checkpoints.astype(float))
    y = means
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    if sxx == 0.0:
        return 0.0, 0.0
    slope = float(((x - xm) * (y - ym)).sum()) / sxx
    pred = ym + slope * (x - xm)
    sst = float(((y - ym) ** 2).sum())
    sse = float(((y - pred) ** 2).sum())
    r2 = 1.0 - sse / sst if sst > 0 else 0.0
    return slope, r2


def probe(scn: Scenario) -> ProbeReport:
    """Monte Carlo recurrence probe at the scenario's budgets."""
    pp = scn.probe
    if pp.horizon * pp.replicas > pp.budget:
        raise BudgetExceeded(
            f"horizon*replicas = {pp.horizon * pp.replicas} exceeds budget {pp.budget}"
        )
    if scn.kind == "frog":
        return _probe_frog(scn)

    law_for_scale = scn.innovation if scn.innovation is not None else scn.w_law
    b_grid = pp.b_grid or default_b_grid(law_for_scale, pp.seed)
    b_arr = np.asarray(b_grid, dtype=float)
    horizon = pp.horizon
    checkpoints = _decade_checkpoints(horizon)
    window_start = horizon // 10

    counts = np.zeros((pp.replicas, len(b_arr)), dtype=np.int64)
    checkpoint_visits = np.zeros((pp.replicas, len(checkpoints)), dtype=np.int64)
    diverged = np.zeros(pp.replicas, dtype=bool)
    finals = np.empty(pp.replicas)

    for i in range(pp.replicas):
        values, log_scale = _replica_norms(scn, horizon, child_rng(pp.seed, i))
        thresholds = np.log(b_arr) if log_scale else b_arr
        counts[i] = (values[:, None] <= thresholds[None, :]).sum(axis=0)
        mask_big = values <= thresholds[-1]
        checkpoint_visits[i] = np.cumsum(mask_big)[checkpoints - 1]
        diverged[i] = float(values[window_start:].min()) > thresholds[-1]
        finals[i] = values[-1]

    visit_means = counts.mean(axis=0)
    divergence_fraction = float(diverged.mean())
    slope, r2 = _growth_fit(checkpoints, checkpoint_visits.mean(axis=0))

    # visits must still be accruing in the last decade, otherwise early
    # passage through [0, b] (e.g. a slowly escaping transient walk)
    # masquerades as growth
    if len(checkpoints) >= 2:
        gains = checkpoint_visits[:, -1] - checkpoint_visits[:, -2]
    else:
        gains = checkpoint_visits[:, -1]
    gain_mean = float(gains.mean())
    gain_se = float(gains.std(ddof=1)) / math.sqrt(pp.replicas) if pp.replicas > 1 else 0.0
    gain_ok = gain_mean >= _GROWTH_SLOPE_MIN * math.log(10.0) and (
        gain_se == 0.0 or gain_mean >= 2.0 * gain_se
    )

    if slope > _GROWTH_SLOPE_MIN and r2 > _GROWTH_R2_MIN and gain_ok:
        hint = RECURRENT_LIKE
    elif divergence_fraction >= _DIVERGENCE_FRACTION:
        hint = TRANSIENT_LIKE
    else:
        hint = AMBIGUOUS

    extra: dict = {"last_decade_gain": gain_mean, "last_decade_gain_se": gain_se}
    if scn.kind == "cookie_walk":
        signed_finals = _cookie_final_positions(scn, pp)
        extra["mean_final_position"] = float(signed_finals.mean())
        extra["positive_final_fraction"] = float((signed_finals > 0).mean())
    return ProbeReport(
        b_grid=[float(b) for b in b_arr],
        visit_means=[float(v) for v in visit_means],
        visit_counts=counts,
        divergence_fraction=divergence_fraction,
        verdict_hint=hint,
        growth_slope=slope,
        growth_r2=r2,
        horizon=horizon,
        replicas=pp.replicas,
        extra=extra,
    )


def _decade_checkpoints(horizon: int) -> np.ndarray:
    pts = []
    n = horizon
    while n >= 10:
        pts.append(n)
        n //= 10
    return np.array(sorted(set(pts)), dtype=np.int64)


def _cookie_final_positions(scn: Scenario, pp: ProbeParams) -> np.ndarray:
    finals = np.empty(pp.replicas)
    for i in range(pp.replicas):
        cfg = CookieWalkConfig(scn.omega_law, scn.cookie_law, pp.horizon)
        summary = simulate_cookie_walk(cfg, child_rng(pp.seed, i))
        finals[i] = summary.final_position
    return finals


def _probe_frog(scn: Scenario) -> ProbeReport:
    pp = scn.probe
    cfg = FrogConfig(
        p=scn.frog_p,
        r=scn.frog_r,
        sleep_law=scn.sleep_law,
        site_cap=scn.site_cap,
        wake_cap=scn.wake_cap,
        step_cap=pp.budget,
    )
    truncated = np.zeros(pp.replicas, dtype=bool)
    woken = np.zeros(pp.replicas, dtype=np.int64)
    zero_visits = np.zeros(pp.replicas, dtype=np.int64)
    for i in range(pp.replicas):
        out = simulate_frog(cfg, child_rng(pp.seed, i))
        truncated[i] = out.truncated
        woken[i] = out.woken_count
        zero_visits[i] = out.zero_visit_count
    truncated_fraction = float(truncated.mean())
    if truncated_fraction <= 1.0 - _DIVERGENCE_FRACTION:
        hint = RECURRENT_LIKE  # every run woke finitely many frogs
    elif truncated_fraction >= _DIVERGENCE_FRACTION:
        hint = TRANSIENT_LIKE
    else:
        hint = AMBIGUOUS
    return ProbeReport(
        b_grid=[],
        visit_means=[],
        visit_counts=None,
        divergence_fraction=truncated_fraction,
        verdict_hint=hint,
        growth_slope=None,
        growth_r2=None,
        horizon=pp.horizon,
        replicas=pp.replicas,
        extra={
            "truncated_fraction": truncated_fraction,
            "mean_woken": float(woken.mean()),
            "mean_zero_visitors": float(zero_visits.mean()),
        },
    )


# ---------------------------------------------------------------------------
# agreement
# ---------------------------------------------------------------------------

PASS = "PASS"
FAIL = "FAIL"
NEUTRAL = "NEUTRAL"


@dataclass
class AgreementReport:
    status: str
    classifier_outcome: str
    probe_hint: str
    detail: str
    verdict: Verdict
    probe_report: ProbeReport

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "classifier_outcome": self.classifier_outcome,
            "probe_hint": self.probe_hint,
            "detail": self.detail,
            "classifier": self.verdict.to_json(),
            "probe": self.probe_report.to_json(),
        }


def agreement(
    scn: Scenario,
    *,
    verdict: Verdict | None = None,
    probe_report: ProbeReport | None = None,
) -> AgreementReport:
    """Cross-validate the analytic verdict against the simulation evidence.

    Disagreement is a report outcome (FAIL), never an exception; pairs
    involving an inconclusive verdict or ambiguous probe are NEUTRAL.
    """
    verdict = verdict or classify_scenario(scn)
    probe_report = probe_report or probe(scn)
    outcome, hint = verdict.outcome, probe_report.verdict_hint

    if outcome == classify.INCONCLUSIVE or hint == AMBIGUOUS:
        status, detail = NEUTRAL, "unresolved side; no cross-check possible"
    elif outcome in classify.RECURRENT_SIDE:
        status = PASS if hint == RECURRENT_LIKE else FAIL
        detail = f"analytic {outcome} vs simulation {hint}"
    elif outcome == classify.TRANSIENT:
        status = PASS if hint == TRANSIENT_LIKE else FAIL
        detail = f"analytic {outcome} vs simulation {hint}"
    elif outcome in (classify.TRANSIENT_LEFT, classify.TRANSIENT_RIGHT):
        mean_final = probe_report.extra.get("mean_final_position", 0.0)
        want_positive = outcome == classify.TRANSIENT_RIGHT
        drift_ok = (mean_final > 0) == want_positive and mean_final != 0
        status = PASS if hint == TRANSIENT_LIKE and drift_ok else FAIL
        detail = f"analytic {outcome} vs {hint}, mean final position {mean_final:.1f}"
    else:
        status, detail = NEUTRAL, f"no rule for outcome {outcome}"
    return AgreementReport(status, outcome, hint, detail, verdict, probe_report)


# ---------------------------------------------------------------------------
# run orchestration (reports on disk)
# ---------------------------------------------------------------------------


def _atomic_write(path: str, data: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _meta(scn: Scenario) -> dict:
    import numpy
    from . import __version__

    return {
        "config": scn.raw,
        "seed": scn.probe.seed,
        "versions": {"subcrit": __version__, "numpy": numpy.__version__},
    }


def write_trajectory_csv(path: str, record: processes.TrajectoryRecord) -> None:
    """CSV with header n,<state columns>,norm and repr-exact floats."""
    cols = record.state_columns()
    lines = ["n," + ",".join(cols) + ("," if cols else "") + "norm"]
    for n in range(record.steps + 1):
        vals = []
        if record.states is not None:
            vals = [repr(float(v)) for v in record.states[n]]
        lines.append(f"{n}," + ",".join(vals) + ("," if vals else "") + repr(float(record.norms[n])))
    _atomic_write(path, "\n".join(lines) + "\n")


def sample_trajectory(scn: Scenario, seed_index: int, steps: int) -> processes.TrajectoryRecord:
    """One recorded trajectory of the scenario's process (for CSV export)."""
    rng = child_rng(scn.probe.seed, seed_index)
    if scn.kind in ("ar", "max_ar"):
        return simulate_ar(
            scn.ensemble, scn.innovation, steps, rng,
            max_recursion=scn.kind == "max_ar",
            track_coupling=False, record_states=True,
        )
    if scn.kind == "branching":
        return simulate_branching(scn.ensemble, scn.innovation, steps, rng, offspring=scn.offspring)
    if scn.kind == "exchange":
        return simulate_exchange(scn.t_law, scn.w_law, steps, rng)
    if scn.kind == "cookie_walk":
        cfg = CookieWalkConfig(scn.omega_law, scn.cookie_law, steps)
        summary, norms = simulate_cookie_walk(cfg, rng, record_norms=True)
        rec = processes.TrajectoryRecord(
            process="cookie_walk", dim=1, steps=steps, norms=norms,
            extra={"summary": summary.__dict__},
        )
        return rec
    raise ConfigError("process.kind", f"no trajectory export for kind '{scn.kind}'")


def run_scenario(
    scn: Scenario,
    out_dir: str,
    *,
    mode: str = "validate",
    trajectories: int = 3,
    trajectory_steps: int | None = None,
) -> dict:
    """Execute the scenario and write report.json / meta.json / CSVs.

    mode: "classify" (analytic only), "probe", or "validate" (both plus
    the agreement row).  Identical (config, seed) produce byte-identical
    outputs.
    """
    os.makedirs(out_dir, exist_ok=True)
    report: dict = {"mode": mode, "process": scn.kind}
    verdict = classify_scenario(scn) if mode in ("classify", "validate") else None
    probe_report = probe(scn) if mode in ("probe", "validate") else None
    if verdict is not None:
        report["classifier"] = verdict.to_json()
    if probe_report is not None:
        report["probe"] = probe_report.to_json()
    if mode == "validate":
        report["agreement"] = agreement(
            scn, verdict=verdict, probe_report=probe_report
        ).to_json()

    if scn.kind != "frog" and trajectories > 0:
        traj_dir = os.path.join(out_dir, "trajectories")
        os.makedirs(traj_dir, exist_ok=True)
        steps = trajectory_steps or min(scn.probe.horizon, 10_000)
        for i in range(trajectories):
            rec = sample_trajectory(scn, i, steps)
            write_trajectory_csv(os.path.join(traj_dir, f"replica_{i:03d}.csv"), rec)

    _atomic_write(os.path.join(out_dir, "report.json"), _json_dumps(report))
    _atomic_write(os.path.join(out_dir, "meta.json"), _json_dumps(_meta(scn)))
    return report
