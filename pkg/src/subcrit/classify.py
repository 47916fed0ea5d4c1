"""Numerical recurrence/transience verdicts for every supported chain.

All criteria share one engine: partial products of distribution-function
factors are accumulated in log space, and divergence of the series of
partial products is decided by a ratio-test ladder.

    r_n = n * (1 - F_n)  (the Raabe statistic of the product series)

The ladder: a finite log-moment resolves positive recurrence outright;
otherwise the robust limit L of r_n over the last decade of the
truncation decides Recurrent (L < 1 - tau) or Transient (L > 1 + tau);
the boundary band falls through to a Bertrand refinement fitting
ln(product_n) = c - ln n - gamma * ln ln n, where gamma > 1 means the
series converges.  Unresolved boundaries are reported Inconclusive, a
first-class outcome - the classifier never guesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import dist
from .dist import ExpOf, InnovationLaw, tail_class
from .errors import (
    AnchorDisagreement,
    CriticalRho,
    NonpositiveDrift,
    Unsupported,
    WrongRegime,
    ZeroAnchor,
)

POSITIVE_RECURRENT = "positive_recurrent"
RECURRENT = "recurrent"
TRANSIENT = "transient"
INCONCLUSIVE = "inconclusive"
TRANSIENT_LEFT = "transient_left"
TRANSIENT_RIGHT = "transient_right"

RECURRENT_SIDE = frozenset({POSITIVE_RECURRENT, RECURRENT})

DEFAULT_N_MAX = 1_000_000
DEFAULT_TAU = 0.05
_TRACE_POINTS = 64


@dataclass
class Verdict:
    """Classification outcome plus the numerical evidence that produced it."""

    outcome: str
    rationale: str
    raabe_limit: float | None = None
    bertrand_gamma: float | None = None
    raabe_tail: list[float] = field(default_factory=list)
    partial_sum_log: list[float] = field(default_factory=list)
    anchors: list[float] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    lambda_value: float | None = None
    lambda_source: str | None = None
    lambda_half_width: float | None = None

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "rationale": self.rationale,
            "raabe_limit": self.raabe_limit,
            "bertrand_gamma": self.bertrand_gamma,
            "raabe_tail": list(self.raabe_tail),
            "partial_sum_log": list(self.partial_sum_log),
            "anchors": list(self.anchors),
            "flags": list(self.flags),
            "lambda": self.lambda_value,
            "lambda_source": self.lambda_source,
            "lambda_half_width": self.lambda_half_width,
        }


@dataclass
class SeriesSpec:
    """Product series sum_n prod_(m<=n) F(m) specified by its factor tails.

    `factor_tail(m)` must return 1 - F(m) for an integer grid array m.
    The first factor must be positive (anchor condition) and lam > 0.
    """

    factor_tail: Callable[[np.ndarray], np.ndarray]
    y: float
    lam: float
    n_max: int = DEFAULT_N_MAX
    tau: float = DEFAULT_TAU

    @classmethod
    def for_innovations(
        cls,
        law: InnovationLaw,
        lam: float,
        y: float,
        n_max: int = DEFAULT_N_MAX,
        tau: float = DEFAULT_TAU,
    ) -> "SeriesSpec":
        """Factors P[||Y_1|| <= y e^(m lam)], evaluated on the log scale."""
        if lam <= 0:
            raise ValueError("lam must be > 0 (subcritical chains only)")
        if y <= 0:
            raise ValueError("anchor y must be > 0")
        ln_y = math.log(y)
        return cls(lambda m: law.tail_ln(ln_y + m * lam), y, lam, n_max, tau)

    @classmethod
    def for_plain_grid(
        cls,
        law: InnovationLaw,
        drift: float,
        y: float,
        n_max: int = DEFAULT_N_MAX,
        tau: float = DEFAULT_TAU,
    ) -> "SeriesSpec":
        """Factors P[W_1 <= y + m * drift] on the plain scale."""
        if drift <= 0:
            raise ValueError("drift must be > 0")
        return cls(lambda m: law.tail(y + m * drift), y, drift, n_max, tau)


@dataclass
class _LadderResult:
    outcome: str
    rationale: str
    raabe_limit: float
    bertrand_gamma: float | None
    raabe_tail: list[float]
    partial_sum_log: list[float]


def _decimate(arr: np.ndarray, points: int = _TRACE_POINTS) -> list[float]:
    if len(arr) <= points:
        return [float(v) for v in arr]
    idx = np.linspace(0, len(arr) - 1, points).astype(int)
    return [float(v) for v in arr[idx]]


def _run_ladder(spec: SeriesSpec) -> _LadderResult:
    m = np.arange(spec.n_max + 1, dtype=float)
    tails = np.asarray(spec.factor_tail(m), dtype=float)
    if tails[0] >= 1.0:
        raise ZeroAnchor(f"anchor y={spec.y} has zero mass below it")
    with np.errstate(divide="ignore"):
        ln_f = np.log1p(-np.minimum(tails, 1.0))
    partial = np.cumsum(ln_f)
    # factors are probabilities, so the log partial products never increase
    assert np.all(np.diff(partial) <= 1e-12), "partial products must be nonincreasing"
    raabe = m * tails

    window = slice(spec.n_max // 10, spec.n_max + 1)
    limit = float(np.median(raabe[window]))
    tail_trace = _decimate(raabe[window])
    partial_trace = _decimate(partial[window])

    if limit < 1.0 - spec.tau:
        return _LadderResult(
            RECURRENT,
            f"raabe limit {limit:.6g} < 1-tau: partial products are not summable",
            limit,
            None,
            tail_trace,
            partial_trace,
        )
    if limit > 1.0 + spec.tau:
        return _LadderResult(
            TRANSIENT,
            f"raabe limit {limit:.6g} > 1+tau: series of partial products converges",
            limit,
            None,
            tail_trace,
            partial_trace,
        )

    gamma, gamma_se = _bertrand_fit(m[window], partial[window])
    if gamma_se < 0.1 * max(1.0, abs(gamma)):
        if gamma > 1.0 + spec.tau:
            return _LadderResult(
                TRANSIENT,
                f"raabe boundary; bertrand gamma {gamma:.4g} > 1+tau",
                limit,
                gamma,
                tail_trace,
                partial_trace,
            )
        if gamma < 1.0 - spec.tau:
            return _LadderResult(
                RECURRENT,
                f"raabe boundary; bertrand gamma {gamma:.4g} < 1-tau",
                limit,
                gamma,
                tail_trace,
                partial_trace,
            )
    return _LadderResult(
        INCONCLUSIVE,
        f"raabe limit {limit:.6g} and bertrand gamma {gamma:.4g} unresolved at tau={spec.tau}",
        limit,
        gamma,
        tail_trace,
        partial_trace,
    )


def _bertrand_fit(n: np.ndarray, partial_log: np.ndarray) -> tuple[float, float]:
    """Fit partial_log = c - ln n - gamma ln ln n; return (gamma, se)."""
    keep = n >= 3.0
    n = n[keep]
    u = partial_log[keep] + np.log(n)
    x = -np.log(np.log(n))
    if len(n) > 512:
        sub = np.linspace(0, len(n) - 1, 512).astype(int)
        u, x = u[sub], x[sub]
    xm, um = x.mean(), u.mean()
    sxx = float(((x - xm) ** 2).sum())
    if sxx == 0.0:
        return 0.0, math.inf
    gamma = float(((x - xm) * (u - um)).sum()) / sxx
    resid = u - um - gamma * (x - xm)
    dof = max(len(u) - 2, 1)
    se = math.sqrt(float((resid**2).sum()) / dof / sxx)
    return gamma, se


def _verdict_from_ladder(res: _LadderResult, spec: SeriesSpec) -> Verdict:
    return Verdict(
        outcome=res.outcome,
        rationale=res.rationale,
        raabe_limit=res.raabe_limit,
        bertrand_gamma=res.bertrand_gamma,
        raabe_tail=res.raabe_tail,
        partial_sum_log=res.partial_sum_log,
        anchors=[spec.y],
        lambda_value=spec.lam,
    )


# ---------------------------------------------------------------------------
# chain-specific entry points
# ---------------------------------------------------------------------------


def series_verdict(
    law: InnovationLaw,
    lam: float,
    y: float = 1.0,
    *,
    n_max: int = DEFAULT_N_MAX,
    tau: float = DEFAULT_TAU,
    lambda_source: str = "given",
    lambda_half_width: float | None = None,
) -> Verdict:
    """Recurrence/transience of the AR / max-AR / branching chains.

    Applies the positive-recurrence shortcut first: a finite log moment
    of the innovation norm already implies a stationary law, and the
    series then diverges automatically.
    """
    spec = SeriesSpec.for_innovations(law, lam, y, n_max, tau)
    tc = tail_class(law)
    flags = []
    if tc.reg_satisfied != dist.YES:
        flags.append("regularity_unverified")
    if tc.log_moment_finite == dist.UNKNOWN:
        flags.append("tail_class_unknown")

    if tc.log_moment_finite == dist.FINITE:
        if float(law.cdf_ln(math.log(y))) <= 0.0:
            raise ZeroAnchor(f"anchor y={y} has zero mass below it")
        res = _run_ladder(spec)  # trace still reported as evidence
        verdict = _verdict_from_ladder(res, spec)
        verdict.outcome = POSITIVE_RECURRENT
        verdict.rationale = (
            "E[ln+||Y_1||] < inf: stationary law exists; series diverges a fortiori"
        )
    else:
        verdict = _verdict_from_ladder(_run_ladder(spec), spec)
    verdict.flags.extend(flags)
    verdict.lambda_source = lambda_source
    verdict.lambda_half_width = lambda_half_width
    return verdict


def kesten_kellerer_verdict(
    w_law: InnovationLaw, *, n_max: int = DEFAULT_N_MAX, tau: float = DEFAULT_TAU
) -> Verdict:
    """Recurrence of the unit-drift integer random exchange process.

    Evaluates sum_n prod_(m<=n) P[W_1 <= m].  When P[W_1 = 0] = 0 the
    anchor is shifted to the smallest integer carrying mass, which does
    not change the verdict.
    """
    if not w_law.integer_valued:
        raise ValueError("kesten_kellerer_verdict needs an integer-valued law")
    m0 = _integer_anchor(w_law)
    spec = SeriesSpec.for_plain_grid(w_law, 1.0, float(m0), n_max, tau)
    verdict = _verdict_from_ladder(_run_ladder(spec), spec)
    if m0 > 0:
        verdict.flags.append(f"anchor_shifted_to_{m0}")
    verdict.lambda_source = "unit_drift"
    return verdict


def _integer_anchor(law: InnovationLaw) -> int:
    m0 = max(int(math.floor(float(law._quantile_arr(np.array([0.0]))[0]))), 0)
    while float(law.cdf(float(m0))) <= 0.0:
        m0 += 1
        if m0 > 10**9:
            raise ZeroAnchor("no integer anchor with positive mass found")
    return m0


def exchange_verdict(
    t_law: InnovationLaw,
    w_law: InnovationLaw,
    y: float,
    *,
    n_max: int = DEFAULT_N_MAX,
    tau: float = DEFAULT_TAU,
) -> Verdict:
    """General random exchange process: factors P[W_1 <= y + m E[T_1]]."""
    if t_law.upper_bound() is None:
        raise Unsupported("exchange criterion requires a bounded T law")
    drift = float(t_law.mean())
    if drift <= 0.0:
        raise NonpositiveDrift(f"E[T_1] = {drift} <= 0")
    if float(w_law.cdf(y)) <= 0.0:
        raise ZeroAnchor(f"anchor y={y} has zero W mass below it")
    spec = SeriesSpec.for_plain_grid(w_law, drift, y, n_max, tau)
    verdict = _verdict_from_ladder(_run_ladder(spec), spec)
    tc = tail_class(ExpOf(w_law))
    if not (tc.reg_satisfied == dist.YES or tc.liminf_t_ln_tail > drift):
        verdict.flags.append("regularity_unverified")
    verdict.lambda_source = "mean_drift"
    return verdict


def frog_rho(p: float, r: float) -> float:
    """Walk-survival root: probability a frog ever advances one site right.

    The smaller root of a = p r + p (1-r) a^2; raises CriticalRho when it
    reaches 1 (e.g. immortal frogs with r >= 1/2).
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    disc = 1.0 - 4.0 * p * p * r * (1.0 - r)
    rho = (1.0 - math.sqrt(max(disc, 0.0))) / (2.0 * p * (1.0 - r))
    if rho >= 1.0:
        raise CriticalRho(f"rho = {rho} >= 1: no subcritical verdict possible")
    return rho


def frog_verdict(
    p: float,
    r: float,
    sleep_law: InnovationLaw,
    y: float,
    *,
    n_max: int = DEFAULT_N_MAX,
    tau: float = DEFAULT_TAU,
) -> Verdict:
    """Finitely-many-frogs-woken criterion via the sleeper-count series."""
    rho = frog_rho(p, r)
    lam = -math.log(rho)
    spec = SeriesSpec.for_innovations(sleep_law, lam, y, n_max, tau)
    verdict = _verdict_from_ladder(_run_ladder(spec), spec)
    verdict.lambda_source = "frog_rho"
    verdict.flags.append(f"rho={rho:.12g}")
    return verdict


def cookie_verdict(
    omega_law: InnovationLaw,
    cookie_law: InnovationLaw,
    y: float = 1.0,
    *,
    n_max: int = DEFAULT_N_MAX,
    tau: float = DEFAULT_TAU,
) -> Verdict:
    """Left/recurrent/right trichotomy of the cookie walk.

    Requires the no-cookie walk to drift left (E[ln rho_0] > 0).  A
    finite log moment of the cookie counts cannot compensate the drift;
    otherwise the series with rate E[ln rho_0] decides recurrent versus
    transient-to-the-right.
    """
    lam = expected_log_rho(omega_law)
    if lam <= 0.0:
        raise WrongRegime(f"E[ln rho_0] = {lam} <= 0: underlying walk not left-drifting")
    tc = tail_class(cookie_law)
    finite = tc.log_moment_finite == dist.FINITE or (
        tc.log_moment_finite == dist.UNKNOWN and cookie_law.upper_bound() is not None
    )
    if finite:
        return Verdict(
            outcome=TRANSIENT_LEFT,
            rationale="E[ln+ Y_0] < inf: cookies cannot compensate the leftward drift",
            lambda_value=lam,
            lambda_source="log_rho_mean",
        )
    spec = SeriesSpec.for_innovations(cookie_law, lam, y, n_max, tau)
    res = _run_ladder(spec)
    verdict = _verdict_from_ladder(res, spec)
    verdict.lambda_value = lam
    verdict.lambda_source = "log_rho_mean"
    if res.outcome == TRANSIENT:
        verdict.outcome = TRANSIENT_RIGHT
        verdict.rationale = "cookie series converges: " + verdict.rationale
    elif res.outcome == RECURRENT:
        verdict.rationale = "cookie series diverges: " + verdict.rationale
    if tc.log_moment_finite == dist.UNKNOWN:
        verdict.flags.append("tail_class_unknown")
    if float(cookie_law.cdf(0.0)) <= 0.0:
        # the walk model posits cookie-free sites with positive probability;
        # without them every frontier site forces a right step
        verdict.flags.append("zero_cookie_mass_hypothesis_violated")
    return verdict


def expected_log_rho(omega_law: InnovationLaw) -> float:
    """E[ln((1 - omega)/omega)] for finite-support environment laws."""
    if isinstance(omega_law, dist.Deterministic):
        w = omega_law.value
        if not 0.0 < w < 1.0:
            raise ValueError("omega must lie in (0, 1)")
        return math.log((1.0 - w) / w)
    if isinstance(omega_law, dist.DiscreteTable):
        vals = omega_law.values
        if np.any(vals <= 0.0) or np.any(vals >= 1.0):
            raise ValueError("omega values must lie in (0, 1)")
        return float(np.dot(omega_law.probs, np.log((1.0 - vals) / vals)))
    raise Unsupported("E[ln rho_0] needs a deterministic or discrete-table omega law")


@dataclass(frozen=True)
class SufficientReport:
    """Outcome of the classical moment-gap sufficient conditions."""

    outcome: str  # TRANSIENT / RECURRENT / "gap" / "unknown"
    limsup: float
    liminf: float
    lam: float


def sufficient_conditions(law: InnovationLaw, lam: float) -> SufficientReport:
    """Fast tail-moment pre-check the series verdict must never contradict.

    Transient when liminf t P[ln Y_1 > t] > lam, recurrent when the
    limsup is below lam, otherwise a gap (or unknown for empirical laws).
    """
    tc = tail_class(law)
    if tc.log_moment_finite == dist.UNKNOWN:
        return SufficientReport("unknown", math.nan, math.nan, lam)
    if tc.liminf_t_ln_tail > lam:
        return SufficientReport(TRANSIENT, tc.limsup_t_ln_tail, tc.liminf_t_ln_tail, lam)
    if tc.limsup_t_ln_tail < lam:
        return SufficientReport(RECURRENT, tc.limsup_t_ln_tail, tc.liminf_t_ln_tail, lam)
    return SufficientReport("gap", tc.limsup_t_ln_tail, tc.liminf_t_ln_tail, lam)


def anchor_scan(
    law: InnovationLaw,
    lam: float,
    y_grid,
    *,
    n_max: int = DEFAULT_N_MAX,
    tau: float = DEFAULT_TAU,
) -> Verdict:
    """Run the series verdict across an anchor grid and demand consensus.

    The criterion is anchor-independent, so disagreement across resolved
    anchors signals a numerical truncation artifact and raises
    AnchorDisagreement with the offending traces attached.
    """
    y_grid = list(y_grid)
    if not y_grid:
        raise ValueError("anchor grid must be nonempty")
    verdicts: list[Verdict] = []
    used: list[float] = []
    skipped: list[float] = []
    for y in y_grid:
        try:
            verdicts.append(series_verdict(law, lam, y, n_max=n_max, tau=tau))
            used.append(float(y))
        except ZeroAnchor:
            skipped.append(float(y))
    if not verdicts:
        raise ZeroAnchor("every anchor in the grid sits below the innovation support")
    resolved = [v for v in verdicts if v.outcome != INCONCLUSIVE]
    outcomes = {v.outcome for v in resolved}
    if len(outcomes) > 1:
        detail = "; ".join(
            f"y={a}: {v.outcome} (L={v.raabe_limit:.4g})" for a, v in zip(used, verdicts)
        )
        raise AnchorDisagreement(f"verdicts disagree across anchors: {detail}", verdicts)
    consensus = resolved[0] if resolved else verdicts[0]
    consensus.anchors = used
    if skipped:
        consensus.flags.append("anchors_skipped_below_support=" + repr(skipped))
    return consensus
