"""Scenario parsing, probe invariants, agreement, run artifacts, CLI."""

import filecmp
import json
import math

import numpy as np
import pytest

from subcrit import cli, harness
from subcrit.errors import BudgetExceeded, ConfigError
from subcrit.harness import agreement, classify_scenario, parse_scenario, probe, run_scenario


def ar_config(**overrides):
    cfg = {
        "process": {"kind": "ar"},
        "ensemble": {"dim": 1, "atoms": [{"matrix": [[0.5]], "p": 1.0}]},
        "innovation": {"kind": "geometric", "q": 0.5},
        "classifier": {"y_grid": [1.0, 10.0], "n_max": 100_000},
        "probe": {"b_grid": [1, 10, 100], "horizon": 2000, "replicas": 10, "seed": 5},
    }
    cfg.update(overrides)
    return cfg


def test_missing_process_field_names_it():
    with pytest.raises(ConfigError) as err:
        parse_scenario({"ensemble": {}})
    assert "process" in str(err.value)


def test_bad_kind_and_bad_law_name_fields():
    with pytest.raises(ConfigError) as err:
        parse_scenario({"process": {"kind": "zebra"}})
    assert "process.kind" in str(err.value)
    with pytest.raises(ConfigError) as err:
        parse_scenario(ar_config(innovation={"kind": "nope"}))
    assert "innovation" in str(err.value)


def test_vector_ensemble_needs_vector_innovation():
    cfg = ar_config(
        ensemble={
            "dim": 2,
            "atoms": [{"matrix": [[0.3, 0.1], [0.2, 0.4]], "p": 1.0}],
        }
    )
    with pytest.raises(ConfigError) as err:
        parse_scenario(cfg)
    assert "innovation" in str(err.value)


def test_probe_budget_enforced():
    scn = parse_scenario(ar_config())
    scn.probe.budget = 100
    with pytest.raises(BudgetExceeded):
        probe(scn)


def test_probe_visit_counts_monotone_in_b_and_horizon():
    scn = parse_scenario(ar_config())
    rep = probe(scn)
    assert np.all(np.diff(rep.visit_counts, axis=1) >= 0)

    short = parse_scenario(ar_config(probe={"b_grid": [1, 10, 100], "horizon": 1000, "replicas": 10, "seed": 5}))
    rep_short = probe(short)
    # same seed, longer horizon: per-replica counts can only grow
    assert np.all(rep.visit_counts >= rep_short.visit_counts)


def test_contractive_chain_with_zero_innovation_is_recurrent_like():
    scn = parse_scenario(ar_config(innovation={"kind": "deterministic", "value": 0.0}))
    rep = probe(scn)
    assert rep.verdict_hint == harness.RECURRENT_LIKE
    # ||X_n|| = 0 throughout: every step is a visit at every b
    assert rep.visit_means == [2001.0, 2001.0, 2001.0]


def test_classify_scenario_uses_spectral_lambda():
    scn = parse_scenario(ar_config())
    v = classify_scenario(scn)
    assert v.lambda_source == "spectral"
    assert v.lambda_value == pytest.approx(math.log(2.0))
    assert v.outcome == "positive_recurrent"


def test_classify_scenario_monte_carlo_lambda():
    cfg = ar_config(
        ensemble={
            "dim": 1,
            "atoms": [{"matrix": [[0.25]], "p": 0.5}, {"matrix": [[0.5]], "p": 0.5}],
        }
    )
    v = classify_scenario(parse_scenario(cfg))
    assert v.lambda_source == "monte_carlo"
    assert v.lambda_half_width > 0
    assert abs(v.lambda_value - 1.5 * math.log(2.0)) < 0.05


def test_lambda_straddle_flag():
    from subcrit.classify import Verdict
    from subcrit.dist import LogPareto
    from subcrit.harness import ClassifierParams, _flag_lambda_straddle

    law = LogPareto(1.0, 1.0)
    verdict = Verdict(outcome="recurrent", rationale="x")
    # CI [0.9, 1.7] spans the beta*lambda = 1 decision boundary
    _flag_lambda_straddle(law, 1.3, 0.4, 1.0, verdict, ClassifierParams())
    assert "lambda_ci_straddles_decision" in verdict.flags

    stable = Verdict(outcome="recurrent", rationale="x")
    _flag_lambda_straddle(law, 2.0, 0.05, 1.0, stable, ClassifierParams())
    assert "lambda_ci_straddles_decision" not in stable.flags


def test_agreement_pass_and_neutral():
    rep = agreement(parse_scenario(ar_config()))
    assert rep.status == harness.PASS

    # inconclusive classifier -> NEUTRAL regardless of the probe
    scn = parse_scenario(ar_config())
    verdict = classify_scenario(scn)
    verdict.outcome = "inconclusive"
    rep = agreement(scn, verdict=verdict)
    assert rep.status == harness.NEUTRAL


def test_exchange_scenario_end_to_end():
    scn = parse_scenario(
        {
            "process": {
                "kind": "exchange",
                "t": {"kind": "deterministic", "value": 1.0},
                "w": {"kind": "discrete_table", "values": [0, 1, 2], "probs": [0.5, 0.3, 0.2]},
                "y": 0.0,
            },
            "probe": {"b_grid": [1, 5, 20], "horizon": 5000, "replicas": 20, "seed": 2},
        }
    )
    assert classify_scenario(scn).outcome == "recurrent"
    assert agreement(scn).status == harness.PASS


def test_frog_scenario_probe_report():
    scn = parse_scenario(
        {
            "process": {
                "kind": "frog",
                "p": 0.8,
                "r": 0.4,
                "sleep": {"kind": "discrete_table", "values": [0, 1, 2], "probs": [0.3, 0.4, 0.3]},
            },
            "probe": {"horizon": 1000, "replicas": 50, "seed": 4},
        }
    )
    rep = probe(scn)
    assert rep.verdict_hint == harness.RECURRENT_LIKE
    assert rep.extra["truncated_fraction"] == 0.0
    assert agreement(scn).status == harness.PASS


def test_probe_geometric_innovation_recurrent_like():
    # positive-recurrent chain visits [0, b] a positive fraction of the time
    scn = parse_scenario(
        ar_config(
            probe={"b_grid": [1, 5, 10], "horizon": 10_000, "replicas": 200, "seed": 6}
        )
    )
    rep = probe(scn)
    assert rep.verdict_hint == harness.RECURRENT_LIKE
    # long-run occupation oracle: one long trajectory's visit fraction
    long_run = parse_scenario(
        ar_config(probe={"b_grid": [10], "horizon": 200_000, "replicas": 1, "seed": 7, "budget": 10**6})
    )
    frac = probe(long_run).visit_means[0] / 200_001
    assert rep.visit_means[-1] / 10_001 == pytest.approx(frac, abs=0.05)


def test_cli_selftest_exit_codes(monkeypatch, capsys):
    from importlib import import_module

    selftest_mod = import_module("subcrit.selftest")
    ok = [selftest_mod.SuiteResult("a", True, "fine")] * 12
    monkeypatch.setattr(selftest_mod, "selftest", lambda: ok)
    assert cli.main(["selftest"]) == cli.EXIT_OK
    bad = ok + [selftest_mod.SuiteResult("z", False, "broken")]
    monkeypatch.setattr(selftest_mod, "selftest", lambda: bad)
    assert cli.main(["selftest"]) == cli.EXIT_CHECK_FAILED
    err_out = capsys.readouterr().out
    assert "[FAIL] z: broken" in err_out


def test_frog_immortal_agreement_pass():
    # classifier recurrent, every simulation wakes finitely many: PASS
    scn = parse_scenario(
        {
            "process": {
                "kind": "frog",
                "p": 1.0,
                "r": 0.25,
                "sleep": {"kind": "discrete_table", "values": [0, 1, 2], "probs": [0.3, 0.4, 0.3]},
            },
            "probe": {"horizon": 1000, "replicas": 100, "seed": 8},
        }
    )
    rep = agreement(scn)
    assert rep.classifier_outcome == "recurrent"
    assert rep.status == harness.PASS


def test_run_scenario_writes_deterministic_artifacts(tmp_path):
    scn = parse_scenario(ar_config())
    d1, d2 = tmp_path / "r1", tmp_path / "r2"
    rep1 = run_scenario(scn, str(d1))
    rep2 = run_scenario(scn, str(d2))
    assert rep1 == rep2
    assert (d1 / "report.json").exists()
    assert (d1 / "meta.json").exists()
    csvs = sorted(p.name for p in (d1 / "trajectories").glob("*.csv"))
    assert csvs == ["replica_000.csv", "replica_001.csv", "replica_002.csv"]
    for name in ["report.json", "meta.json"] + [f"trajectories/{c}" for c in csvs]:
        assert filecmp.cmp(d1 / name, d2 / name, shallow=False), name
    header = (d1 / "trajectories" / "replica_000.csv").read_text().splitlines()[0]
    assert header == "n,v1,norm"
    meta = json.loads((d1 / "meta.json").read_text())
    assert meta["seed"] == 5
    assert meta["config"]["process"]["kind"] == "ar"


def test_report_contains_agreement_block(tmp_path):
    scn = parse_scenario(ar_config())
    report = run_scenario(scn, str(tmp_path / "out"))
    assert report["agreement"]["status"] == harness.PASS
    assert report["classifier"]["outcome"] == "positive_recurrent"


# -- CLI ----------------------------------------------------------------------


def write_config(tmp_path, cfg):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_cli_classify_ok(tmp_path, capsys):
    path = write_config(tmp_path, ar_config())
    assert cli.main(["classify", "--config", path]) == cli.EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["classifier"]["outcome"] == "positive_recurrent"


def test_cli_validate_writes_reports(tmp_path, capsys):
    path = write_config(tmp_path, ar_config())
    out_dir = tmp_path / "run"
    assert cli.main(["validate", "--config", path, "--out", str(out_dir)]) == cli.EXIT_OK
    assert (out_dir / "report.json").exists()


def test_cli_simulate(tmp_path, capsys):
    path = write_config(tmp_path, ar_config())
    assert cli.main(["simulate", "--config", path, "--seed", "9", "--steps", "50"]) == cli.EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["steps"] == 50


def test_cli_lyapunov(tmp_path, capsys):
    path = write_config(tmp_path, ar_config())
    assert cli.main(["lyapunov", "--config", path]) == cli.EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["lambda"] == pytest.approx(math.log(2.0))


def test_cli_config_error_exit_code(tmp_path, capsys):
    path = write_config(tmp_path, {"process": {}})
    assert cli.main(["classify", "--config", path]) == cli.EXIT_CONFIG
    assert "process.kind" in capsys.readouterr().err


def test_cli_budget_exit_code(tmp_path, capsys):
    cfg = ar_config(probe={"horizon": 100_000, "replicas": 1000, "seed": 1, "budget": 1000})
    path = write_config(tmp_path, cfg)
    assert cli.main(["validate", "--config", path]) == cli.EXIT_BUDGET


def test_cli_frog_and_cookie(capsys):
    code = cli.main(
        ["frog", "--p", "0.8", "--r", "0.4", "--sleep", '{"kind":"geometric","q":0.5}']
    )
    assert code == cli.EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["rho"] == pytest.approx(0.3948260543224992)

    code = cli.main(
        [
            "cookie-walk",
            "--omega", '{"kind":"deterministic","value":0.4}',
            "--cookies", '{"kind":"geometric","q":0.5}',
            "--steps", "5000",
        ]
    )
    assert code == cli.EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["classifier"]["outcome"] == "transient_left"
    assert out["simulation"]["final_position"] < 0
