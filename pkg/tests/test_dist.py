"""Law evaluation, sampling, and tail metadata."""

import math

import numpy as np
import pytest

from subcrit import dist
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
    law_from_json,
    tail_class,
)
from subcrit.errors import Unsupported
from subcrit.selftest import ks_statistic
from subcrit.streams import root_rng


def test_log_pareto_tail_formula():
    # P[ln(1+Y) > t] = (1 + beta t)^-p
    law = LogPareto(1.0, 1.0)
    assert law.tail(math.e**3 - 1) == pytest.approx(0.25, abs=1e-14)
    law2 = LogPareto(2.0, 0.5)
    for t in (0.0, 1.0, 7.5):
        assert law2.tail(math.expm1(t)) == pytest.approx((1 + 2.0 * t) ** -0.5, rel=1e-13)


def test_pareto_tail_and_deterministic():
    assert ParetoTail(2.0).tail(8.0) == pytest.approx(0.25)
    assert ParetoTail(2.0).tail(1.0) == 1.0
    det = Deterministic(5.0)
    assert det.cdf(4.9) == 0.0
    assert det.cdf(5.0) == 1.0


def test_tail_is_one_minus_cdf_everywhere():
    laws = [
        LogPareto(1.0, 2.0),
        ParetoTail(1.5),
        Geometric(0.3),
        Poisson(2.0),
        Deterministic(2.0),
        DiscreteTable([0, 2, 7], [0.2, 0.5, 0.3]),
        Shifted(Geometric(0.5), 2.0),
        FloorOf(ExpOf(ParetoTail(1.0))),
    ]
    xs = np.array([0.0, 0.5, 1.0, 2.0, 6.9, 7.0, 100.0])
    for law in laws:
        np.testing.assert_allclose(law.tail(xs), 1.0 - law.cdf(xs), atol=1e-14)


def test_log_scale_evaluation_matches_plain_scale():
    laws = [LogPareto(1.0, 0.5), ParetoTail(2.0), Geometric(0.5), ExpOf(ParetoTail(2.0))]
    ts = np.array([-2.0, 0.0, 1.0, 5.0, 20.0])
    for law in laws:
        np.testing.assert_allclose(
            law.tail_ln(ts), law.tail(np.exp(ts)), rtol=1e-12, atol=1e-300
        )


def test_log_scale_reaches_huge_arguments():
    law = LogPareto(1.0, 1.0)
    t = 1e6 * math.log(2.0)
    # P[ln Y > t] ~ 1/(beta t); no overflow allowed
    assert law.tail_ln(t) == pytest.approx(1.0 / (1.0 + t), rel=1e-6)
    assert Geometric(0.5).tail_ln(t) == 0.0
    assert ExpOf(ParetoTail(3.0)).tail_ln(t) == pytest.approx(3.0 / t)


def test_geometric_pmf_convention():
    law = Geometric(0.5)
    # P[Y = k] = 0.5^(k+1)
    assert law.cdf(0.0) == pytest.approx(0.5)
    assert law.cdf(1.0) == pytest.approx(0.75)
    assert law.mean() == pytest.approx(1.0)


def test_scaled_vector_norm_cdf_is_power():
    base = Geometric(0.5)
    vec = ScaledVector(base, 3)
    xs = np.array([0.0, 1.0, 4.0])
    np.testing.assert_allclose(vec.cdf(xs), base.cdf(xs) ** 3, rtol=1e-12)
    sample = vec.sample(root_rng(0))
    assert sample.shape == (3,)
    batch = vec.sample(root_rng(0), 10)
    assert batch.shape == (10, 3)


def test_floor_and_shift_compositions():
    law = FloorOf(ExpOf(ParetoTail(0.5)))
    assert law.integer_valued
    samples = law.sample(root_rng(1), 1000)
    assert np.all(samples == np.floor(samples))
    shifted = Shifted(law, 50.0)
    assert shifted.integer_valued
    assert float(shifted._quantile_arr(np.array([0.0]))[0]) >= 50.0


def test_inverse_transform_sampling_ks():
    n = 20_000
    band = 1.95 / math.sqrt(n)
    for i, law in enumerate(
        [
            LogPareto(1.0, 2.0),
            ParetoTail(2.0),
            Geometric(0.5),
            Poisson(3.0),
            Deterministic(4.0),
            DiscreteTable([0.0, 1.0, 2.0], [0.5, 0.3, 0.2]),
        ]
    ):
        stat = ks_statistic(law.sample(root_rng(40 + i), n), law)
        assert stat < band, (law.kind, stat)


def test_sample_ln_matches_log_of_sample():
    # identical stream -> identical values, just computed on the ln scale
    law = LogPareto(1.0, 0.5)
    plain = law.sample(root_rng(7), 500)
    lns = law.sample_ln(root_rng(7), 500)
    finite = np.isfinite(plain) & (plain > 0)
    np.testing.assert_allclose(lns[finite], np.log(plain[finite]), rtol=1e-12)


def test_tail_class_log_pareto_trichotomy():
    tc = tail_class(LogPareto(1.0, 2.0))
    assert tc.log_moment_finite == dist.FINITE
    assert tc.limsup_t_ln_tail == 0.0

    tc = tail_class(LogPareto(0.5, 1.0))
    assert tc.log_moment_finite == dist.INFINITE
    assert tc.limsup_t_ln_tail == pytest.approx(2.0)
    assert tc.liminf_t_ln_tail == pytest.approx(2.0)

    tc = tail_class(LogPareto(1.0, 0.5))
    assert tc.log_moment_finite == dist.INFINITE
    assert tc.limsup_t_ln_tail == math.inf


def test_tail_class_light_and_unknown():
    assert tail_class(Geometric(0.5)).log_moment_finite == dist.FINITE
    assert tail_class(Geometric(0.5)).limsup_t_ln_tail == 0.0
    assert tail_class(DiscreteTable([0, 1], [0.5, 0.5])).log_moment_finite == dist.UNKNOWN
    tc = tail_class(ExpOf(ParetoTail(1.5)))
    assert tc.log_moment_finite == dist.INFINITE
    assert tc.limsup_t_ln_tail == pytest.approx(1.5)
    vec = tail_class(ScaledVector(LogPareto(1.0, 1.0), 2))
    assert vec.limsup_t_ln_tail == pytest.approx(2.0)


def test_floor_law_below_shifted_plain_law():
    # cdf of the integer-part law never exceeds the base cdf one ln-unit up
    for base in (LogPareto(1.0, 1.0), ExpOf(ParetoTail(2.0))):
        floored = FloorOf(base)
        xs = np.linspace(0.0, 50.0, 201)
        assert np.all(floored.cdf_ln(xs) <= base.cdf_ln(xs + 1.0) + 1e-12)


def test_discrete_table_validation():
    with pytest.raises(ValueError):
        DiscreteTable([0, 1], [0.5, 0.6])
    with pytest.raises(ValueError):
        DiscreteTable([0, -1], [0.5, 0.5])


def test_law_from_json_round_trip():
    spec = {
        "kind": "shifted",
        "offset": 3.0,
        "base": {"kind": "floor_of", "base": {"kind": "exp_of", "base": {"kind": "pareto_tail", "a": 2.0}}},
    }
    law = law_from_json(spec)
    assert law.to_json() == spec
    with pytest.raises(ValueError):
        law_from_json({"kind": "nope"})
    with pytest.raises(ValueError):
        law_from_json({"kind": "log_pareto", "beta": 1.0})


def test_mean_unsupported_for_heavy_laws():
    with pytest.raises(Unsupported):
        LogPareto(1.0, 2.0).mean()


def test_cdf_right_continuous_nondecreasing_to_one():
    laws = [
        LogPareto(1.0, 0.5),
        ParetoTail(2.0),
        Geometric(0.5),
        Poisson(3.0),
        Deterministic(4.0),
        DiscreteTable([0.0, 1.5, 7.0], [0.2, 0.5, 0.3]),
        FloorOf(ExpOf(ParetoTail(1.0))),
        Shifted(Geometric(0.5), 2.0),
        dist.ZeroInflated(ExpOf(ParetoTail(1.0)), 0.4),
    ]
    grid = np.concatenate([np.linspace(0.0, 20.0, 400), [1e3, 1e6, 1e12]])
    for law in laws:
        vals = law.cdf(grid)
        assert np.all(np.diff(vals) >= -1e-12), law.kind
        # cdf(inf) = 1, approached on the ln scale (super-heavy tails are slow)
        assert float(law.cdf_ln(1e9)) > 0.99, law.kind
        # right continuity at atoms: approaching from above changes nothing
        atoms = np.array([0.0, 1.0, 2.0, 7.0])
        np.testing.assert_allclose(
            law.cdf(np.nextafter(atoms, np.inf)), law.cdf(atoms), atol=1e-12
        )


def test_zero_inflated_mixture():
    base = ExpOf(ParetoTail(0.5))
    law = dist.ZeroInflated(base, 0.5)
    assert law.cdf(0.0) == pytest.approx(0.5)
    xs = np.array([2.0, 10.0, 1e4])
    np.testing.assert_allclose(law.tail(xs), 0.5 * base.tail(xs), rtol=1e-12)
    tc = tail_class(law)
    assert tc.log_moment_finite == dist.INFINITE
    assert tc.limsup_t_ln_tail == pytest.approx(0.25)
    samples = law.sample(root_rng(60), 20_000)
    assert abs((samples == 0.0).mean() - 0.5) < 0.02
    stat = ks_statistic(samples, law)
    assert stat < 1.95 / math.sqrt(20_000)
    round_trip = law_from_json(law.to_json())
    assert round_trip.to_json() == law.to_json()
