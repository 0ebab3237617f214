"""Command-line interface.

Subcommands:
  run       simulate one scenario, print summary metrics, optionally save a CSV log
  compare   run baseline and adaptive variants of the same scenario side by side
  audit     evaluate the gain-condition certificate for a scenario
  scenarios list the bundled scenario names

Exit codes: 0 on success, 1 on a runtime abort, 2 on a configuration error.
"""

import argparse
import json
import sys

from . import config
from .audit import run_audit
from .errors import ConfigError, SimulationAbort, WindquadError
from .sim import metrics, run_scenario


def _resolve(name_or_path):
    if name_or_path.endswith(".json"):
        return name_or_path
    return config.bundled_scenario_path(name_or_path)


def _add_common(sub):
    sub.add_argument("--config", required=True,
                     help="scenario JSON path, or a bundled scenario name")
    sub.add_argument("--seed", type=int, default=None, help="override RNG seed")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="windquad",
        description="quadrotor flight simulator with adaptive geometric control")
    subs = parser.add_subparsers(dest="command", required=True)

    run_p = subs.add_parser("run", help="simulate one scenario")
    _add_common(run_p)
    run_p.add_argument("--variant", choices=["adaptive", "baseline"], default=None)
    run_p.add_argument("--out", default=None, help="CSV log output path")

    cmp_p = subs.add_parser("compare", help="baseline vs adaptive on one scenario")
    _add_common(cmp_p)
    cmp_p.add_argument("--out", default=None,
                       help="prefix for CSV logs (<prefix>_baseline.csv, <prefix>_adaptive.csv)")

    audit_p = subs.add_parser("audit", help="check the gain-condition certificate")
    audit_p.add_argument("--config", required=True,
                         help="scenario JSON path, or a bundled scenario name")
    audit_p.add_argument("--assumptions", default=None,
                         help="JSON file with certificate assumption bounds")
    audit_p.add_argument("--json", action="store_true", dest="as_json",
                         help="emit a machine-readable report")

    subs.add_parser("scenarios", help="list bundled scenarios")
    return parser


def _cmd_run(args):
    overrides = {}
    cfg = config.load_scenario(_resolve(args.config))
    if args.seed is not None:
        cfg.seed = args.seed
    if args.variant is not None:
        cfg.variant = args.variant
    log = run_scenario(cfg)
    if args.out:
        log.to_csv(args.out)
        print(f"log written to {args.out} ({len(log)} records)")
    print(f"variant: {cfg.variant}  plant: {cfg.plant}  duration: {cfg.duration}s")
    print(metrics(log).as_text())
    return 0


def _cmd_compare(args):
    results = {}
    for variant in ("baseline", "adaptive"):
        cfg = config.load_scenario(_resolve(args.config))
        if args.seed is not None:
            cfg.seed = args.seed
        cfg.variant = variant
        log = run_scenario(cfg)
        results[variant] = metrics(log)
        if args.out:
            path = f"{args.out}_{variant}.csv"
            log.to_csv(path)
            print(f"log written to {path}")
    for variant, m in results.items():
        print(f"\n== {variant} ==")
        print(m.as_text())
    b, a = results["baseline"], results["adaptive"]
    if b.rms_ex > 0.0:
        print(f"\nrms |e_x| ratio (adaptive/baseline): {a.rms_ex / b.rms_ex:.4f}")
    return 0


def _cmd_audit(args):
    cfg = config.load_scenario(_resolve(args.config))
    if args.assumptions:
        assumptions = config.load_audit_assumptions(args.assumptions)
    else:
        assumptions = config.load_audit_assumptions({})
    report = run_audit(cfg.gains, cfg.params, cfg.adaptive_pos,
                       cfg.adaptive_att, assumptions)
    if args.as_json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(report.as_text())
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "compare":
            return _cmd_compare(args)
        if args.command == "audit":
            return _cmd_audit(args)
        if args.command == "scenarios":
            for name in config.bundled_scenarios():
                print(name)
            return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SimulationAbort as exc:
        where = f" at t={exc.t:.4f}s" if exc.t is not None else ""
        print(f"simulation aborted{where}: {exc}", file=sys.stderr)
        return 1
    except WindquadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
