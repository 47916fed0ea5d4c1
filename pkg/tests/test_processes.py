"""Simulator contracts: coupling, closed forms, branching, frog, cookie walk."""

import math

import numpy as np
import pytest

from subcrit.dist import (
    Deterministic,
    DiscreteTable,
    ExpOf,
    FloorOf,
    Geometric,
    LogPareto,
    ParetoTail,
    Poisson,
    ScaledVector,
    Shifted,
)
from subcrit.errors import DimensionMismatch, PopulationOverflow
from subcrit.matrix_env import MatrixEnsemble, sup_norm
from subcrit.processes import (
    CookieWalkConfig,
    FrogConfig,
    OffspringModel,
    ar_start,
    ar_step,
    branching_on_path,
    branching_start,
    branching_step,
    closed_form_ar,
    draw_environment,
    exchange_path,
    exchange_step,
    ExchangeState,
    log_cumsum_exp,
    scalar_ar_log_norms,
    scalar_log_norms_from_path,
    simulate_ar,
    simulate_branching,
    simulate_cookie_walk,
    simulate_exchange,
    simulate_frog,
)
from subcrit.streams import child_rng, root_rng

TWO_ATOM = MatrixEnsemble(
    [[[0.3, 0.1], [0.2, 0.4]], [[0.2, 0.2], [0.1, 0.3]]], [0.5, 0.5]
)


# -- autoregressive family ---------------------------------------------------


def test_ar_step_scalar_arithmetic():
    st = ar_start(np.array([2.0]))
    st = ar_step(st, np.array([[0.5]]), np.array([1.0]))
    assert st.x[0] == pytest.approx(2.0)
    assert st.m[0] == pytest.approx(1.0)  # max(0.5*2, 1)
    assert st.nvec[0] == pytest.approx(1.0)


def test_ar_step_dimension_check():
    st = ar_start(np.array([1.0, 1.0]))
    with pytest.raises(DimensionMismatch):
        ar_step(st, np.eye(3), np.ones(3))


def test_geometric_sum_closed_form():
    st = ar_start(np.array([1.0]))
    for _ in range(10):
        st = ar_step(st, np.array([[0.5]]), np.array([1.0]))
    assert st.x[0] == pytest.approx(2.0 - 2.0**-10, abs=1e-12)
    assert st.m[0] == pytest.approx(1.0)


def test_recursion_matches_explicit_solution_scalar():
    rng = root_rng(12)
    n = 100
    a_seq = [np.array([[v]]) for v in rng.uniform(0.05, 0.95, n)]
    ys = [np.array([v]) for v in rng.uniform(0.0, 2.0, n + 1)]
    oracle = closed_form_ar(a_seq, ys)
    st = ar_start(ys[0])
    for k in range(1, n + 1):
        st = ar_step(st, a_seq[k - 1], ys[k])
        assert st.x[0] == pytest.approx(oracle[k, 0], abs=k * 1e-13 * max(1.0, oracle[k, 0]))


def test_recursion_matches_explicit_solution_2d():
    rng = root_rng(13)
    n = 60
    a_seq = [rng.uniform(0.0, 0.45, (2, 2)) for _ in range(n)]
    ys = [rng.uniform(0.0, 2.0, 2) for _ in range(n + 1)]
    oracle = closed_form_ar(a_seq, ys)
    st = ar_start(ys[0])
    for k in range(1, n + 1):
        st = ar_step(st, a_seq[k - 1], ys[k])
    np.testing.assert_allclose(st.x, oracle[n], rtol=n * 1e-13)


def test_nvec_equals_definition_oracle():
    # N_n = max over m <= n of A_n ... A_(m+1) Y_m, computed from scratch
    rng = root_rng(44)
    a_seq = [rng.uniform(0.05, 0.5, (2, 2)) for _ in range(30)]
    ys = [rng.uniform(0.0, 2.0, 2) for _ in range(31)]
    st = ar_start(ys[0])
    for k in range(1, 31):
        st = ar_step(st, a_seq[k - 1], ys[k])
        terms = []
        for m in range(k + 1):
            v = ys[m].copy()
            for j in range(m + 1, k + 1):
                v = a_seq[j - 1] @ v
            terms.append(v)
        oracle = np.max(terms, axis=0)
        np.testing.assert_allclose(st.nvec, oracle, rtol=1e-12)


def test_coupling_chain_random_scenarios():
    rng = root_rng(14)
    for _ in range(30):
        d = int(rng.integers(1, 4))
        a = rng.uniform(0.05, 1.0, (d, d))
        a *= 0.8 / sup_norm(a)
        ens = MatrixEnsemble.constant(a)
        law = LogPareto(1.0, 1.0) if d == 1 else ScaledVector(LogPareto(1.0, 1.0), d)
        rec = simulate_ar(ens, law, 200, rng, track_coupling=True)
        tol = 1e-9 * (1.0 + rec.norms_x)
        assert np.all(rec.norms_n <= rec.norms_m + tol)
        assert np.all(rec.norms_m <= rec.norms_x + tol)


def test_simulate_ar_primary_norm_selection():
    rec = simulate_ar(TWO_ATOM, ScaledVector(Geometric(0.5), 2), 50, root_rng(15))
    assert np.array_equal(rec.norms, rec.norms_x)
    rec_m = simulate_ar(
        TWO_ATOM, ScaledVector(Geometric(0.5), 2), 50, root_rng(15), max_recursion=True
    )
    assert np.array_equal(rec_m.norms, rec_m.norms_m)


def test_scalar_fast_path_matches_direct_recursion():
    ens = MatrixEnsemble([[[0.25]], [[0.5]]], [0.5, 0.5])
    law = Geometric(0.5)
    n = 300
    ln = scalar_ar_log_norms(ens, law, n, child_rng(16, 0))
    # replay the identical draws through the plain recursion
    rng = child_rng(16, 0)
    idx = ens.sample_index(rng, size=n)
    vals = np.array([0.25, 0.5])[idx]
    ys = np.exp(law.sample_ln(rng, size=n + 1))
    x = ys[0]
    for k in range(1, n + 1):
        x = vals[k - 1] * x + ys[k]
        assert math.log(x) == pytest.approx(ln[k], abs=1e-9)


def test_scalar_fast_path_max_recursion():
    ln_a = np.log(np.full(50, 0.5))
    ln_y = np.zeros(51)  # Y = 1 always
    m = scalar_log_norms_from_path(ln_a, ln_y, max_recursion=True)
    np.testing.assert_allclose(m, 0.0, atol=1e-12)  # M_n = 1 for all n


def test_log_cumsum_exp_against_sequential():
    rng = root_rng(17)
    c = np.concatenate([rng.normal(0, 3, 100), [800.0], rng.normal(800, 1, 50), [-np.inf]])
    got = log_cumsum_exp(c)
    acc = -math.inf
    for i, v in enumerate(c):
        acc = np.logaddexp(acc, v)
        assert got[i] == pytest.approx(acc, abs=1e-12)


# -- branching ---------------------------------------------------------------


def test_branching_zero_state_is_absorbing():
    st = branching_start(np.zeros(2))
    off = OffspringModel("poisson")
    for k in range(5):
        st = branching_step(st, off, TWO_ATOM.atoms[k % 2], np.zeros(2), root_rng(18))
    assert np.all(st.z == 0)


def test_branching_conditional_mean_ties_to_atom():
    # one reproduction round from a large population: empirical mean of the
    # children per parent approaches the atom entries
    off = OffspringModel("poisson")
    a = TWO_ATOM.atoms[0]
    parents = np.array([20_000, 10_000])
    kids = off.sample_children(a, parents, root_rng(19))
    expected = a @ parents
    assert np.all(np.abs(kids - expected) <= 5 * np.sqrt(expected))


def test_branching_bernoulli_lineage_survival():
    # single founder, Bernoulli(0.5) offspring: P[alive at n] = 0.5^n
    ens = MatrixEnsemble.constant([[0.5]])
    off = OffspringModel("bernoulli")
    ys = np.zeros((6, 1))
    ys[0, 0] = 1.0
    replicas = 4000
    alive = 0
    for rep in range(replicas):
        z = branching_on_path(
            ens, np.zeros(5, dtype=np.int64), ys, off, child_rng(20, rep)
        )
        alive += int(z[5, 0] > 0)
    p_hat = alive / replicas
    sigma = math.sqrt(0.5**5 * (1 - 0.5**5) / replicas)
    assert abs(p_hat - 0.5**5) <= 3 * sigma


def test_branching_aggregate_matches_cohort_law():
    # same seed, both representations: equal in distribution, so compare
    # moments across replicas
    law = ScaledVector(Poisson(1.5), 2)
    off = OffspringModel("poisson")
    idx, ys = draw_environment(TWO_ATOM, law, 10, child_rng(21, 0))
    finals_cohort = []
    finals_agg = []
    for rep in range(600):
        z1 = branching_on_path(TWO_ATOM, idx, ys, off, child_rng(22, rep))
        z2 = branching_on_path(
            TWO_ATOM, idx, ys, off, child_rng(23, rep), aggregate_cohorts=True
        )
        finals_cohort.append(z1[-1].sum())
        finals_agg.append(z2[-1].sum())
    m1, m2 = np.mean(finals_cohort), np.mean(finals_agg)
    s = math.sqrt(np.var(finals_cohort) / 600 + np.var(finals_agg) / 600)
    assert abs(m1 - m2) <= 5 * max(s, 1e-9)


def test_branching_bernoulli_mean_validation():
    off = OffspringModel("bernoulli")
    hot = MatrixEnsemble.constant([[1.5]])
    with pytest.raises(ValueError):
        off.validate_ensemble(hot)


def test_branching_population_cap():
    ens = MatrixEnsemble.constant([[3.0]])  # supercritical on purpose
    off = OffspringModel("poisson")
    st = branching_start(np.array([1000.0]))
    with pytest.raises(PopulationOverflow):
        for k in range(40):
            st = branching_step(
                st, off, ens.atoms[0], np.zeros(1), root_rng(24), population_cap=100_000
            )


def test_simulate_branching_record():
    rec = simulate_branching(TWO_ATOM, ScaledVector(Poisson(2.0), 2), 15, root_rng(25))
    assert rec.process == "branching"
    assert rec.states.shape == (16, 2)
    assert np.all(rec.states >= 0)


# -- exchange ----------------------------------------------------------------


def test_exchange_step_arithmetic():
    st = exchange_step(ExchangeState(5.0, 0), 1.0, 3.0)
    assert st.r == 4.0


def test_exchange_kesten_identity():
    w_law = DiscreteTable([0.0, 1.0, 2.0], [0.5, 0.3, 0.2])
    replicas = 100_000
    rng = root_rng(26)
    r = np.zeros(replicas)
    for _ in range(3):
        r = np.maximum(r - 1.0, w_law.sample(rng, replicas))
    p_hat = float((r == 0.0).mean())
    sigma = math.sqrt(0.4 * 0.6 / replicas)
    assert abs(p_hat - 0.4) <= 3 * sigma


def test_exchange_path_matches_step_recursion():
    rng = root_rng(27)
    ts = rng.integers(0, 3, 200).astype(float)
    ws = rng.integers(0, 6, 201).astype(float)
    path = exchange_path(ts, ws)
    st = ExchangeState(float(ws[0]), 0)
    for k in range(1, 201):
        st = exchange_step(st, float(ts[k - 1]), float(ws[k]))
        assert st.r == path[k]  # integer arithmetic: exact


def test_exponentiation_bridge_exchange_equals_max_ar():
    # e^R is the scalar max-AR path with A = e^-T, Y = e^W, bit for bit
    rng = root_rng(28)
    ts = rng.uniform(0.1, 2.0, 150)
    ws = rng.uniform(0.0, 5.0, 151)
    r_path = exchange_path(ts, ws)
    m_path = scalar_log_norms_from_path(-ts, ws, max_recursion=True)
    assert np.array_equal(r_path, m_path)


def test_simulate_exchange_record():
    rec = simulate_exchange(Deterministic(1.0), Geometric(0.5), 100, root_rng(29))
    assert rec.norms.shape == (101,)
    assert np.all(rec.norms >= 0)


# -- frog --------------------------------------------------------------------


def test_frog_empty_origin_wakes_nobody():
    cfg = FrogConfig(0.9, 0.4, Deterministic(0.0))
    out = simulate_frog(cfg, root_rng(30))
    assert out.woken_count == 0
    assert not out.truncated


def test_frog_bounded_sleep_terminates():
    cfg = FrogConfig(0.8, 0.4, DiscreteTable([0, 1, 2], [0.3, 0.4, 0.3]))
    for i in range(50):
        out = simulate_frog(cfg, child_rng(31, i))
        assert not out.truncated
        assert out.woken_count < 10_000


def test_frog_heavy_sleep_hits_wake_cap():
    heavy = Shifted(FloorOf(ExpOf(ParetoTail(2.0))), 50.0)
    cfg = FrogConfig(0.8, 0.4, heavy, wake_cap=500)
    hits = 0
    for i in range(30):
        out = simulate_frog(cfg, child_rng(32, i))
        hits += out.truncated
    assert hits == 30


def test_frog_budget_is_outcome_not_exception():
    cfg = FrogConfig(0.999, 0.45, Deterministic(5.0), step_cap=200)
    out = simulate_frog(cfg, root_rng(33))
    assert out.truncated


def test_frog_immortal_subcritical_terminates():
    # p = 1 frogs never die, but the wake wave is subcritical (rho = 1/3);
    # the sub-zero pruning keeps every run finite
    cfg = FrogConfig(1.0, 0.25, DiscreteTable([0, 1, 2], [0.3, 0.4, 0.3]))
    for i in range(100):
        out = simulate_frog(cfg, child_rng(39, i))
        assert not out.truncated
        assert out.woken_count < 10_000


def test_frog_pruning_preserves_woken_distribution():
    # p < 1 mortal frogs: compare mean woken with pruning implicitly on
    # against an unpruned reference implementation
    law = DiscreteTable([0, 1, 2], [0.3, 0.4, 0.3])

    def unpruned_mean_woken(seeds):
        total = 0
        for i in seeds:
            rng = child_rng(40, i)
            sleepers, visited, stack = {}, set(), []
            woken = 0

            def visit(site):
                nonlocal woken
                if site < 0:
                    return
                if site not in sleepers:
                    visited.add(site)
                    sleepers[site] = int(law.sample(rng))
                while sleepers[site] > 0:
                    sleepers[site] -= 1
                    woken += 1
                    stack.append(site)

            visit(0)
            while stack:
                pos = stack.pop()
                while rng.random() < 0.8:
                    pos += 1 if rng.random() < 0.4 else -1
                    visit(pos)
            total += woken
        return total / len(seeds)

    cfg = FrogConfig(0.8, 0.4, law)
    pruned = [simulate_frog(cfg, child_rng(41, i)).woken_count for i in range(4000)]
    reference = unpruned_mean_woken(range(4000))
    se = np.std(pruned, ddof=1) / math.sqrt(len(pruned)) * math.sqrt(2)
    assert abs(np.mean(pruned) - reference) <= 5 * se


# -- cookie walk ---------------------------------------------------------------


def test_cookie_walk_forced_right_while_cookies_last():
    cfg = CookieWalkConfig(Deterministic(0.4), Deterministic(1e9), steps=500)
    summary = simulate_cookie_walk(cfg, root_rng(34))
    assert summary.final_position == 500
    assert summary.cookies_consumed == 500


def test_cookie_walk_plain_rwre_drifts_left():
    cfg = CookieWalkConfig(Deterministic(0.4), Deterministic(0.0), steps=20_000)
    below = 0
    for i in range(20):
        summary = simulate_cookie_walk(cfg, child_rng(35, i))
        below += summary.final_position < -1000
    assert below == 20


def test_cookie_walk_symmetric_no_cookies_recurrent_band():
    cfg = CookieWalkConfig(Deterministic(0.5), Deterministic(0.0), steps=10_000)
    returns = [
        simulate_cookie_walk(cfg, child_rng(36, i)).returns_to_zero for i in range(20)
    ]
    mean_returns = float(np.mean(returns))
    # simple-walk return counts grow like sqrt(n); generous band
    assert 0.2 * math.sqrt(10_000) <= mean_returns <= 3.0 * math.sqrt(10_000)


def test_cookie_walk_norm_recording():
    cfg = CookieWalkConfig(Deterministic(0.5), Geometric(0.5), steps=100)
    summary, norms = simulate_cookie_walk(cfg, root_rng(37), record_norms=True)
    assert norms.shape == (101,)
    assert norms[0] == 0.0
    assert norms[-1] == abs(summary.final_position)


# -- determinism ----------------------------------------------------------------


def test_identical_seed_identical_trajectory():
    for maker in (
        lambda rng: simulate_ar(TWO_ATOM, ScaledVector(Geometric(0.5), 2), 40, rng).norms,
        lambda rng: simulate_branching(
            TWO_ATOM, ScaledVector(Poisson(2.0), 2), 20, rng
        ).norms,
        lambda rng: simulate_exchange(Deterministic(1.0), Geometric(0.5), 50, rng).norms,
    ):
        a = maker(child_rng(38, 0))
        b = maker(child_rng(38, 0))
        assert np.array_equal(a, b)
