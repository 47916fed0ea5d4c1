"""Exact simulators for the six process families.

All simulators draw from a caller-owned Generator and are strictly
sequential along a trajectory; replica parallelism happens one level up
with derived substreams.  The autoregressive simulator runs the additive
chain X, the max-autoregressive chain M, and the product-max chain N
coupled on one (A, Y) stream; N has no one-step recursion for d > 1 and
is maintained exactly by keeping every past innovation propagated
through the running left product (O(n d) memory).

State-norm sequences use the sup norm throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dist import InnovationLaw
from .errors import DimensionMismatch, PopulationOverflow
from .matrix_env import MatrixEnsemble, sup_norm

_POPULATION_CAP = 100_000_000


@dataclass
class TrajectoryRecord:
    """Seeded sample path: per-step state norms plus environment draws."""

    process: str
    dim: int
    steps: int
    norms: np.ndarray                      # ||V_n|| of the primary chain, length steps+1
    norms_x: np.ndarray | None = None      # coupled additive chain
    norms_m: np.ndarray | None = None      # coupled max-AR chain
    norms_n: np.ndarray | None = None      # coupled product-max chain
    states: np.ndarray | None = None       # (steps+1, dim) when recorded
    env_indices: np.ndarray | None = None  # atom index per step (1-based steps)
    innovation_norms: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    def state_columns(self) -> list[str]:
        if self.states is None:
            return []
        return [f"v{i+1}" for i in range(self.states.shape[1])]


# ---------------------------------------------------------------------------
# autoregressive family (coupled X, M, N)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArState:
    """Coupled states after `step` absorbed innovations.

    Componentwise nvec <= m <= x at every step.  `prod_rows` holds
    A_n ... A_(m+1) Y_m for every m <= n; its columnwise max is nvec.
    """

    x: np.ndarray
    m: np.ndarray
    nvec: np.ndarray
    step: int
    prod_rows: np.ndarray  # (step+1, dim)


def ar_start(y0) -> ArState:
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    rows = y0[None, :].copy()
    return ArState(y0.copy(), y0.copy(), y0.copy(), 0, rows)


def ar_step(state: ArState, a: np.ndarray, y) -> ArState:
    """One coupled step: x' = Ax + y, m' = max(Am, y), n' recomputed exactly."""
    a = np.asarray(a, dtype=float)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    d = state.x.shape[0]
    if a.shape != (d, d) or y.shape != (d,):
        raise DimensionMismatch(f"expected ({d},{d}) matrix and ({d},) vector")
    if np.any(a < 0) or np.any(y < 0):
        raise ValueError("coefficients and innovations must be nonnegative")
    x = a @ state.x + y
    m = np.maximum(a @ state.m, y)
    rows = np.vstack([state.prod_rows @ a.T, y[None, :]])
    nvec = rows.max(axis=0)
    # hard coupling invariant; slack covers float rounding only
    tol = 1e-9 * (1.0 + np.abs(x))
    assert np.all(nvec <= m + tol) and np.all(m <= x + tol), "coupling chain violated"
    return ArState(x, m, nvec, state.step + 1, rows)


def draw_environment(
    ensemble: MatrixEnsemble, law: InnovationLaw, n: int, rng: np.random.Generator
):
    """One (A, Y) path: Y_0 then (A_k, Y_k) for k = 1..n, in that draw order.

    The branching simulator reuses the identical path so the conditional
    mean of the population equals the additive chain when innovations
    are integers.
    """
    d = ensemble.dim
    if law.dim not in (1, d):
        raise DimensionMismatch(f"innovation dim {law.dim} incompatible with d={d}")

    def draw_y():
        y = law.sample(rng)
        return np.atleast_1d(np.asarray(y, dtype=float))

    y0 = draw_y()
    if y0.shape != (d,):
        if d == 1:
            raise DimensionMismatch("scalar ensemble needs scalar innovations")
        raise DimensionMismatch("vector ensemble needs a scaled_vector innovation law")
    idx = np.empty(n, dtype=np.int64)
    ys = np.empty((n + 1, d))
    ys[0] = y0
    for k in range(1, n + 1):
        idx[k - 1] = ensemble.sample_index(rng)
        ys[k] = draw_y()
    return idx, ys


def simulate_ar(
    ensemble: MatrixEnsemble,
    law: InnovationLaw,
    n: int,
    rng: np.random.Generator,
    *,
    max_recursion: bool = False,
    track_coupling: bool = True,
    record_states: bool = False,
) -> TrajectoryRecord:
    """Coupled (X, M, N) trajectory on a single (A, Y) stream.

    With track_coupling=False only the primary chain is advanced
    (X, or M when max_recursion is set), which keeps long probe runs
    linear in n.
    """
    idx, ys = draw_environment(ensemble, law, n, rng)
    d = ensemble.dim
    states = np.empty((n + 1, d)) if record_states else None
    norms_x = norms_m = norms_n = None

    if track_coupling:
        norms_x = np.empty(n + 1)
        norms_m = np.empty(n + 1)
        norms_n = np.empty(n + 1)
        # in-place variant of repeated ar_step: same arithmetic, same draws,
        # but the product rows live in one preallocated buffer
        x = ys[0].copy()
        mvec = ys[0].copy()
        rows = np.empty((n + 1, d))
        rows[0] = ys[0]
        norms_x[0] = norms_m[0] = norms_n[0] = sup_norm(ys[0])
        if record_states:
            states[0] = mvec if max_recursion else x
        for k in range(1, n + 1):
            a = ensemble.atoms[idx[k - 1]]
            y = ys[k]
            x = a @ x + y
            mvec = np.maximum(a @ mvec, y)
            rows[:k] = rows[:k] @ a.T
            rows[k] = y
            nvec = rows[: k + 1].max(axis=0)
            tol = 1e-9 * (1.0 + np.abs(x))
            assert np.all(nvec <= mvec + tol) and np.all(mvec <= x + tol), (
                "coupling chain violated"
            )
            norms_x[k] = sup_norm(x)
            norms_m[k] = sup_norm(mvec)
            norms_n[k] = sup_norm(nvec)
            if record_states:
                states[k] = mvec if max_recursion else x
        norms = norms_m.copy() if max_recursion else norms_x.copy()
    else:
        norms = np.empty(n + 1)
        v = ys[0].copy()
        norms[0] = sup_norm(v)
        if record_states:
            states[0] = v
        for k in range(1, n + 1):
            a = ensemble.atoms[idx[k - 1]]
            v = np.maximum(a @ v, ys[k]) if max_recursion else a @ v + ys[k]
            norms[k] = sup_norm(v)
            if record_states:
                states[k] = v

    return TrajectoryRecord(
        process="max_ar" if max_recursion else "ar",
        dim=d,
        steps=n,
        norms=norms,
        norms_x=norms_x,
        norms_m=norms_m,
        norms_n=norms_n,
        states=states,
        env_indices=idx,
        innovation_norms=np.abs(ys).max(axis=1),
    )


def closed_form_ar(atoms_seq, ys) -> np.ndarray:
    """Independent oracle: X_n = sum over m of (A_n ... A_(m+1)) Y_m.

    Quadratic in n; used by tests to pin the recursion to the explicit
    solution of the random difference equation.
    """
    ys = [np.atleast_1d(np.asarray(y, dtype=float)) for y in ys]
    n = len(atoms_seq)
    d = ys[0].shape[0]
    out = np.empty((n + 1, d))
    for k in range(n + 1):
        total = np.zeros(d)
        for m in range(k + 1):
            v = ys[m].copy()
            for j in range(m + 1, k + 1):
                v = np.asarray(atoms_seq[j - 1], dtype=float) @ v
            total += v
        out[k] = total
    return out


# -- scalar fast path (constant coefficient), exact in log space -----------


def log_cumsum_exp(c: np.ndarray) -> np.ndarray:
    """ln of cumulative sums of e^(c_m), overflow-safe for any drift/jumps."""
    with np.errstate(invalid="ignore"):
        return np.logaddexp.accumulate(np.asarray(c, dtype=float))


def scalar_log_norms_from_path(
    ln_a: np.ndarray, ln_y: np.ndarray, *, max_recursion: bool = False
) -> np.ndarray:
    """ln X_n (or ln M_n) of the scalar chain along a fixed (a, Y) path.

    Uses the prefix representation X_n = P_n * sum_m Y_m / P_m with
    P_n = a_1 ... a_n, so everything stays on the ln scale and
    super-heavy innovations beyond float range never overflow.
    """
    ln_a = np.asarray(ln_a, dtype=float)
    ln_y = np.asarray(ln_y, dtype=float)
    if len(ln_y) != len(ln_a) + 1:
        raise DimensionMismatch("need one more innovation than coefficients")
    prefix = np.concatenate(([0.0], np.cumsum(ln_a)))
    c = ln_y - prefix
    if max_recursion:
        return prefix + np.maximum.accumulate(c)
    return prefix + log_cumsum_exp(c)


def scalar_ar_log_norms(
    ensemble: MatrixEnsemble,
    law: InnovationLaw,
    n: int,
    rng: np.random.Generator,
    *,
    max_recursion: bool = False,
) -> np.ndarray:
    """Fast exact path for scalar ensembles: bulk-draw, then prefix scan.

    Draw order: all coefficient indices, then all ln innovations.  Every
    atom must be strictly positive (a zero scalar annihilates the chain).
    """
    if ensemble.dim != 1:
        raise DimensionMismatch("scalar fast path needs a 1x1 ensemble")
    vals = np.array([float(a[0, 0]) for a in ensemble.atoms])
    if np.any(vals <= 0.0):
        raise ValueError("scalar fast path requires positive coefficients")
    idx = ensemble.sample_index(rng, size=n)
    ln_a = np.log(vals)[idx]
    ln_y = law.sample_ln(rng, size=n + 1)
    return scalar_log_norms_from_path(ln_a, ln_y, max_recursion=max_recursion)


def exchange_path(ts: np.ndarray, ws: np.ndarray) -> np.ndarray:
    """Vectorized exchange path: R_n = max_m (W_m + C_m) - C_n, C = cumsum T.

    Identical to iterating r' = max(r - t, w); cross-checked against the
    step function in the tests.
    """
    ts = np.asarray(ts, dtype=float)
    ws = np.asarray(ws, dtype=float)
    if len(ws) != len(ts) + 1:
        raise DimensionMismatch("need one more W draw than T draws")
    c = np.concatenate(([0.0], np.cumsum(ts)))
    return np.maximum.accumulate(ws + c) - c


# ---------------------------------------------------------------------------
# branching with immigration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OffspringModel:
    """Product-form offspring law tied to the ensemble atom of each step.

    Children counts of type i from a type-j parent are i.i.d. with mean
    equal to entry (i, j) of the step's coefficient matrix; components
    are independent across (i, j).  All three families have finite
    x ln x offspring moment.
    """

    kind: str  # "poisson" | "bernoulli" | "geometric"

    def __post_init__(self):
        if self.kind not in ("poisson", "bernoulli", "geometric"):
            raise ValueError(f"unknown offspring kind '{self.kind}'")

    xlogx_moment_finite = True

    def validate_ensemble(self, ensemble: MatrixEnsemble) -> None:
        if self.kind == "bernoulli":
            for a in ensemble.atoms:
                if np.any(a > 1.0):
                    raise ValueError("bernoulli offspring needs mean entries <= 1")

    def covariance_sup_bound(self, ensemble: MatrixEnsemble) -> float:
        """gamma_2: sup-norm bound on the per-type conditional covariance."""
        worst = 0.0
        for a in ensemble.atoms:
            for j in range(ensemble.dim):
                col = a[:, j]
                if self.kind == "poisson":
                    var = col
                elif self.kind == "bernoulli":
                    var = col * (1.0 - col)
                else:
                    var = col * (1.0 + col)
                worst = max(worst, float(var.max()))
        return worst

    def sample_children(
        self, mean: np.ndarray, parents: np.ndarray, rng: np.random.Generator
    ) -> np.ndarray:
        """Total children vector produced by `parents` (counts per type).

        Sampling is aggregated per (parent-type, child-type) pair: binomial
        / negative-binomial / Poisson totals are exactly the laws of sums
        of the per-individual draws.
        """
        parents = np.asarray(parents)
        if self.kind == "poisson":
            lam = mean @ parents
            return rng.poisson(lam)
        if self.kind == "bernoulli":
            reps = np.broadcast_to(parents, mean.shape)  # row i: parents per type j
            return rng.binomial(reps, mean).sum(axis=1)
        pi = mean / (1.0 + mean)
        reps = np.broadcast_to(parents, mean.shape)
        draws = rng.negative_binomial(np.maximum(reps, 1), 1.0 - pi)
        return np.where(reps > 0, draws, 0).sum(axis=1)


@dataclass(frozen=True)
class BranchingState:
    """Population split by immigration cohort; z is the exact cohort sum."""

    cohorts: tuple[np.ndarray, ...]
    z: np.ndarray
    step: int
    env_draw: np.ndarray | None = None


def branching_start(immigrants) -> BranchingState:
    founders = np.floor(np.atleast_1d(np.asarray(immigrants, dtype=float))).astype(np.int64)
    return BranchingState((founders,), founders.copy(), 0, None)


def branching_step(
    state: BranchingState,
    offspring: OffspringModel,
    a: np.ndarray,
    immigrants,
    rng: np.random.Generator,
    *,
    population_cap: int = _POPULATION_CAP,
) -> BranchingState:
    """Advance every cohort by one reproduction round, then admit immigrants."""
    a = np.asarray(a, dtype=float)
    new_cohorts = []
    for cohort in state.cohorts:
        if cohort.sum() == 0:
            new_cohorts.append(cohort)
        else:
            new_cohorts.append(offspring.sample_children(a, cohort, rng).astype(np.int64))
    arrivals = np.floor(np.atleast_1d(np.asarray(immigrants, dtype=float))).astype(np.int64)
    if np.any(arrivals < 0):
        raise ValueError("immigrants must be nonnegative")
    new_cohorts.append(arrivals)
    z = np.sum(new_cohorts, axis=0)
    if int(z.sum()) > population_cap:
        raise PopulationOverflow(f"population {int(z.sum())} exceeds cap {population_cap}")
    return BranchingState(tuple(new_cohorts), z, state.step + 1, a)


def branching_on_path(
    ensemble: MatrixEnsemble,
    atom_indices: np.ndarray,
    ys: np.ndarray,
    offspring: OffspringModel,
    rng: np.random.Generator,
    *,
    population_cap: int = _POPULATION_CAP,
    aggregate_cohorts: bool = False,
) -> np.ndarray:
    """Population trajectory on a fixed environment/immigration path.

    Returns z of shape (n+1, d).  Redrawing only the offspring noise on
    a frozen path is what the conditional-mean identity tests need.
    With aggregate_cohorts=True the per-cohort split is dropped and one
    aggregated reproduction draw per step is used; the law of z is
    unchanged (offspring are i.i.d. across individuals) and replicated
    runs get much cheaper.
    """
    offspring.validate_ensemble(ensemble)
    n = len(atom_indices)
    out = np.empty((n + 1, ensemble.dim), dtype=np.int64)
    if aggregate_cohorts:
        z = np.floor(np.atleast_1d(np.asarray(ys[0], dtype=float))).astype(np.int64)
        out[0] = z
        for k, idx in enumerate(atom_indices, start=1):
            a = ensemble.atoms[idx]
            kids = (
                offspring.sample_children(a, z, rng).astype(np.int64)
                if z.sum() > 0
                else np.zeros_like(z)
            )
            z = kids + np.floor(np.atleast_1d(np.asarray(ys[k], dtype=float))).astype(np.int64)
            if int(z.sum()) > population_cap:
                raise PopulationOverflow(f"population {int(z.sum())} exceeds cap")
            out[k] = z
        return out
    state = branching_start(ys[0])
    out[0] = state.z
    for k, idx in enumerate(atom_indices, start=1):
        state = branching_step(
            state, offspring, ensemble.atoms[idx], ys[k], rng, population_cap=population_cap
        )
        out[k] = state.z
    return out


def simulate_branching(
    ensemble: MatrixEnsemble,
    law: InnovationLaw,
    n: int,
    rng: np.random.Generator,
    *,
    offspring: OffspringModel | None = None,
    population_cap: int = _POPULATION_CAP,
) -> TrajectoryRecord:
    """Branching process with immigration floor(Y) in a sampled environment."""
    offspring = offspring or OffspringModel("poisson")
    idx, ys = draw_environment(ensemble, law, n, rng)
    z = branching_on_path(ensemble, idx, ys, offspring, rng, population_cap=population_cap)
    return TrajectoryRecord(
        process="branching",
        dim=ensemble.dim,
        steps=n,
        norms=np.abs(z).max(axis=1).astype(float),
        states=z.astype(float),
        env_indices=idx,
        innovation_norms=np.abs(ys).max(axis=1),
        extra={"offspring": offspring.kind},
    )


# ---------------------------------------------------------------------------
# general random exchange process
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExchangeState:
    r: float
    step: int


def exchange_step(state: ExchangeState, t: float, w: float) -> ExchangeState:
    """r' = max(r - t, w)."""
    return ExchangeState(max(state.r - t, w), state.step + 1)


def simulate_exchange(
    t_law: InnovationLaw, w_law: InnovationLaw, n: int, rng: np.random.Generator
) -> TrajectoryRecord:
    """R_0 = W_0, R_k = max(R_(k-1) - T_k, W_k); draw order (T_k, W_k)."""
    r = float(w_law.sample(rng))
    norms = np.empty(n + 1)
    states = np.empty((n + 1, 1))
    norms[0] = abs(r)
    states[0, 0] = r
    st = ExchangeState(r, 0)
    for k in range(1, n + 1):
        t = float(t_law.sample(rng))
        w = float(w_law.sample(rng))
        st = exchange_step(st, t, w)
        norms[k] = abs(st.r)
        states[k, 0] = st.r
    return TrajectoryRecord(
        process="exchange", dim=1, steps=n, norms=norms, states=states
    )


# ---------------------------------------------------------------------------
# mortal frog process
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrogConfig:
    """Mortal frogs on Z with sleepers on sites >= 0.

    p is the per-step survival probability (lifetimes are geometric and
    may be 0), r the right-step probability.  Budgets turn transient
    runs into truncated outcomes instead of hangs.
    """

    p: float
    r: float
    sleep_law: InnovationLaw
    site_cap: int = 100_000
    wake_cap: int = 100_000
    step_cap: int = 10_000_000

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError("survival probability p must lie in (0, 1]")
        if not 0.0 < self.r < 1.0:
            raise ValueError("right-step probability r must lie in (0, 1)")


@dataclass(frozen=True)
class FrogOutcome:
    woken_count: int
    zero_visit_count: int
    truncated: bool
    sites_explored: int
    total_steps: int


def simulate_frog(config: FrogConfig, rng: np.random.Generator) -> FrogOutcome:
    """Event-driven frog run: process each awake frog's full trajectory.

    Sleeper counts are sampled lazily per site on first visit; waking is
    idempotent so the processing order does not change the woken set.
    Sites below 0 hold no sleepers, so a frog stepping to -1 is resolved
    by one Bernoulli draw with the exact survive-and-return probability
    (the same root as the rightward advance), which keeps immortal
    (p = 1) runs finite whenever the wake wave is.  Hitting
    wake/site/step budgets yields truncated=True, never an exception.
    """
    disc = 1.0 - 4.0 * config.p**2 * config.r * (1.0 - config.r)
    return_prob = min(
        (1.0 - math.sqrt(max(disc, 0.0))) / (2.0 * config.p * (1.0 - config.r)), 1.0
    )
    sleepers_left: dict[int, float] = {}
    visited: set[int] = set()
    stack: list[int] = []
    woken = 0
    zero_visitors = 0
    steps = 0
    truncated = False

    def visit(site: int) -> None:
        # wake everything sleeping at `site`; respects the wake budget
        nonlocal woken, truncated
        if site < 0:
            return
        if site not in sleepers_left:
            if len(visited) >= config.site_cap:
                truncated = True
                return
            visited.add(site)
            count = float(config.sleep_law.sample(rng))
            sleepers_left[site] = math.floor(count) if math.isfinite(count) else math.inf
        while sleepers_left[site] > 0:
            if woken >= config.wake_cap:
                truncated = True
                return
            sleepers_left[site] -= 1
            woken += 1
            stack.append(site)

    visit(0)
    while stack and not truncated:
        pos = stack.pop()
        if pos == 0:
            zero_visitors += 1
        hit_zero = pos == 0
        # walk until the geometric lifetime ends (survive each step w.p. p)
        while rng.random() < config.p:
            if steps >= config.step_cap:
                truncated = True
                break
            steps += 1
            pos += 1 if rng.random() < config.r else -1
            if pos < 0:
                # sleeper-free territory: resolve the excursion in one draw
                if rng.random() < return_prob:
                    pos = 0
                else:
                    break
            visit(pos)
            if pos == 0 and not hit_zero:
                zero_visitors += 1
                hit_zero = True
            if truncated:
                break

    return FrogOutcome(
        woken_count=woken,
        zero_visit_count=zero_visitors,
        truncated=truncated,
        sites_explored=len(visited),
        total_steps=steps,
    )


# ---------------------------------------------------------------------------
# cookie walk (excited RWRE)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CookieWalkConfig:
    """RWRE on Z forced right on the first Y_x visits to each site x."""

    omega_law: InnovationLaw
    cookie_law: InnovationLaw
    steps: int


@dataclass
class CookieWalkSummary:
    final_position: int
    min_position: int
    max_position: int
    returns_to_zero: int
    cookies_consumed: int
    truncated: bool = False


class _DrawBuffer:
    """Chunked draws consumed one at a time; keeps per-step cost tiny."""

    __slots__ = ("_fill", "_buf", "_pos")

    def __init__(self, fill):
        self._fill = fill
        self._buf = ()
        self._pos = 0

    def take(self) -> float:
        if self._pos >= len(self._buf):
            self._buf = self._fill(4096)
            self._pos = 0
        val = self._buf[self._pos]
        self._pos += 1
        return val


def simulate_cookie_walk(
    config: CookieWalkConfig, rng: np.random.Generator, *, record_norms: bool = False
):
    """Run the cookie walk; optionally also return |position| per step.

    Per-site environment omega_x and cookie stock Y_x are assigned on
    first need, in first-visit order, from chunked i.i.d. draws (the
    assignment order does not change the law) and memoized, so only
    visited sites cost memory.
    """
    cookie_draws = _DrawBuffer(lambda n: config.cookie_law.sample(rng, n))
    omega_draws = _DrawBuffer(lambda n: config.omega_law.sample(rng, n))
    coin_draws = _DrawBuffer(lambda n: rng.random(n))

    cookies: dict[int, float] = {}
    omegas: dict[int, float] = {}
    pos = 0
    returns = 0
    consumed = 0
    lo = hi = 0
    norms = np.empty(config.steps + 1) if record_norms else None
    if record_norms:
        norms[0] = 0.0

    for k in range(1, config.steps + 1):
        stock = cookies.get(pos)
        if stock is None:
            raw = cookie_draws.take()
            stock = math.floor(raw) if math.isfinite(raw) else math.inf
            cookies[pos] = stock
        if stock > 0:
            cookies[pos] = stock - 1
            consumed += 1
            pos += 1
        else:
            om = omegas.get(pos)
            if om is None:
                om = omega_draws.take()
                if not 0.0 < om < 1.0:
                    raise ValueError("omega law must produce values in (0, 1)")
                omegas[pos] = om
            pos += 1 if coin_draws.take() < om else -1
        if pos == 0:
            returns += 1
        elif pos < lo:
            lo = pos
        elif pos > hi:
            hi = pos
        if record_norms:
            norms[k] = abs(pos)

    summary = CookieWalkSummary(
        final_position=pos,
        min_position=min(lo, pos),
        max_position=max(hi, pos),
        returns_to_zero=returns,
        cookies_consumed=consumed,
    )
    return (summary, norms) if record_norms else summary
