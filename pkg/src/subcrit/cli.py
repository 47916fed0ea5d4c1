"""Command-line surface.

    subcrit classify    --config S.json [--out DIR]
    subcrit simulate    --config S.json --seed N [--out DIR] [--steps N]
    subcrit lyapunov    --config S.json
    subcrit validate    --config S.json [--out DIR]
    subcrit frog        --p 0.9 --r 0.3 --sleep '{"kind":"geometric","q":0.5}' ...
    subcrit cookie-walk --omega '{...}' --cookies '{...}' ...
    subcrit selftest

Exit codes: 0 ok, 1 config error, 2 selftest/agreement failure,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import classify, harness
from .dist import law_from_json
from .errors import BudgetExceeded, ConfigError, SubcritError
from .harness import load_scenario, run_scenario
from .matrix_env import estimate_lyapunov
from .processes import CookieWalkConfig, FrogConfig, simulate_cookie_walk, simulate_frog
from .streams import child_rng

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CHECK_FAILED = 2
EXIT_BUDGET = 3


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _cmd_classify(args) -> int:
    scn = load_scenario(args.config)
    if args.out:
        report = run_scenario(scn, args.out, mode="classify", trajectories=0)
    else:
        report = {"classifier": harness.classify_scenario(scn).to_json()}
    _emit(report)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    scn = load_scenario(args.config)
    if args.seed is not None:
        scn.probe.seed = args.seed
    steps = args.steps or min(scn.probe.horizon, 10_000)
    if scn.kind == "frog":
        cfg = FrogConfig(scn.frog_p, scn.frog_r, scn.sleep_law, scn.site_cap, scn.wake_cap)
        out = simulate_frog(cfg, child_rng(scn.probe.seed, 0))
        _emit({"frog": out.__dict__})
        return EXIT_OK
    rec = harness.sample_trajectory(scn, 0, steps)
    if args.out:
        import os

        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "trajectory.csv")
        harness.write_trajectory_csv(path, rec)
        _emit({"written": path, "steps": rec.steps, "final_norm": float(rec.norms[-1])})
    else:
        _emit(
            {
                "process": rec.process,
                "steps": rec.steps,
                "final_norm": float(rec.norms[-1]),
                "min_norm": float(rec.norms.min()),
                "max_norm": float(rec.norms.max()),
                "extra": rec.extra,
            }
        )
    return EXIT_OK


def _cmd_lyapunov(args) -> int:
    scn = load_scenario(args.config)
    if scn.ensemble is None:
        raise ConfigError("ensemble", "lyapunov needs an ensemble-based process")
    lam, source, hw = harness.resolve_lambda(scn.ensemble, scn.probe.seed)
    out = {"lambda": lam, "source": source, "half_width": hw}
    if source == "monte_carlo":
        est = estimate_lyapunov(scn.ensemble, args.steps, args.replicas, scn.probe.seed)
        out = {
            "lambda": est.lambda_hat,
            "source": "monte_carlo",
            "half_width": est.half_width,
            "steps": est.trajectory_length,
            "replicas": est.replicas,
        }
    _emit(out)
    return EXIT_OK


def _cmd_validate(args) -> int:
    scn = load_scenario(args.config)
    if args.out:
        report = run_scenario(scn, args.out, mode="validate")
    else:
        rep = harness.agreement(scn)
        report = {"agreement": rep.to_json()}
    _emit(report)
    status = report.get("agreement", {}).get("status")
    return EXIT_CHECK_FAILED if status == harness.FAIL else EXIT_OK


def _law_arg(text: str, field: str):
    try:
        return law_from_json(json.loads(text))
    except (json.JSONDecodeError, ValueError) as exc:
        raise ConfigError(field, str(exc)) from exc


def _cmd_frog(args) -> int:
    sleep = _law_arg(args.sleep, "sleep")
    rho = classify.frog_rho(args.p, args.r)
    verdict = classify.frog_verdict(args.p, args.r, sleep, args.y)
    cfg = FrogConfig(args.p, args.r, sleep, args.site_cap, args.wake_cap)
    sim = simulate_frog(cfg, child_rng(args.seed, 0))
    _emit({"rho": rho, "classifier": verdict.to_json(), "simulation": sim.__dict__})
    return EXIT_OK


def _cmd_cookie_walk(args) -> int:
    omega = _law_arg(args.omega, "omega")
    cookies = _law_arg(args.cookies, "cookies")
    verdict = classify.cookie_verdict(omega, cookies, args.y)
    summary = simulate_cookie_walk(
        CookieWalkConfig(omega, cookies, args.steps), child_rng(args.seed, 0)
    )
    _emit({"classifier": verdict.to_json(), "simulation": summary.__dict__})
    return EXIT_OK


def _cmd_selftest(_args) -> int:
    from .selftest import selftest

    results = selftest()
    failed = 0
    for res in results:
        tag = "PASS" if res.passed else "FAIL"
        print(f"[{tag}] {res.name}: {res.detail}")
        failed += 0 if res.passed else 1
    print(f"{len(results) - failed}/{len(results)} suites passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subcrit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="analytic recurrence/transience verdict")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("simulate", help="one seeded trajectory")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("lyapunov", help="contraction-rate estimate for the ensemble")
    p.add_argument("--config", required=True)
    p.add_argument("--steps", type=int, default=2000)
    p.add_argument("--replicas", type=int, default=200)
    p.set_defaults(fn=_cmd_lyapunov)

    p = sub.add_parser("validate", help="classifier + probe + agreement")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("frog", help="frog criterion and one simulation")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--sleep", required=True, help="sleep law JSON")
    p.add_argument("--y", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--site-cap", type=int, default=100_000)
    p.add_argument("--wake-cap", type=int, default=100_000)
    p.set_defaults(fn=_cmd_frog)

    p = sub.add_parser("cookie-walk", help="cookie-walk trichotomy and one simulation")
    p.add_argument("--omega", required=True, help="environment law JSON")
    p.add_argument("--cookies", required=True, help="cookie-count law JSON")
    p.add_argument("--y", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_cookie_walk)

    p = sub.add_parser("selftest", help="run the invariant battery")
    p.set_defaults(fn=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SubcritError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
