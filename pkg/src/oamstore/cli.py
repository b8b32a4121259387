"""Command line front end.

    oamstore run CONFIG [--seed N] [--out DIR] [--threads N] [--format F]
    oamstore validate CONFIG
    oamstore verify REPORT
    oamstore presets list
    oamstore presets emit NAME

Exit codes: 0 success, 1 validation failure (bad config, preset name, or a
verify mismatch), 2 runtime failure, 3 estimator did not converge.
The output directory defaults to $OAMSTORE_OUT, then "runs".
"""
import argparse
import json
import os
import sys

from . import __version__
from .config import has_errors, load_config, validate_config
from .pipelines import ConfigurationError, run, verify_report
from .presets import DESCRIPTIONS, get_preset, preset_names
from .validation import ContractError

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_NO_CONVERGENCE = 3


def _build_parser():
    p = argparse.ArgumentParser(prog="oamstore",
                                description="photonic qutrit storage pipelines")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("run", help="execute a pipeline config")
    pr.add_argument("config", help="path to a JSON config, or a preset name")
    pr.add_argument("--seed", type=int, default=None, help="override the seed")
    pr.add_argument("--out", default=None, help="output directory root")
    pr.add_argument("--threads", type=int, default=1)
    pr.add_argument("--format", choices=("json", "csv"), default="json",
                    help="summary print format")

    pv = sub.add_parser("validate", help="check a config without running it")
    pv.add_argument("config")

    pw = sub.add_parser("verify", help="recompute a report from its artifacts")
    pw.add_argument("report")

    pp = sub.add_parser("presets", help="list or emit shipped configs")
    psub = pp.add_subparsers(dest="presets_command", required=True)
    psub.add_parser("list")
    pe = psub.add_parser("emit")
    pe.add_argument("name")
    return p


def _load_cfg(path_or_name):
    if path_or_name in preset_names() and not os.path.exists(path_or_name):
        return get_preset(path_or_name)
    return load_config(path_or_name)


def _print_findings(findings, file=sys.stderr):
    for f in findings:
        print(str(f), file=file)


def _cmd_run(args):
    try:
        cfg = _load_cfg(args.config)
    except FileNotFoundError:
        print(f"config not found: {args.config}", file=sys.stderr)
        return EXIT_VALIDATION
    except (json.JSONDecodeError, ValueError) as e:
        print(f"config is not valid JSON: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.seed is not None:
        cfg["seed"] = args.seed
    try:
        report, run_dir = run(cfg, out=args.out, threads=args.threads)
    except ConfigurationError as e:
        _print_findings(e.findings)
        return EXIT_VALIDATION
    except (ContractError, ValueError, KeyError, OSError) as e:
        print(f"run failed: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    summary = {
        "run_dir": run_dir,
        "pipeline": report["pipeline"],
        "seed": report["seed"],
        "converged": report["converged"],
        "summary_metrics": report["summary_metrics"],
    }
    if args.format == "json":
        print(json.dumps(summary, indent=2))
    else:
        print("metric,value")
        for k, v in report["summary_metrics"].items():
            print(f"{k},{v!r}")
        print(f"run_dir,{run_dir}")
    if not report["converged"]:
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _cmd_validate(args):
    try:
        cfg = load_config(args.config)
    except FileNotFoundError:
        print(f"config not found: {args.config}", file=sys.stderr)
        return EXIT_VALIDATION
    except (json.JSONDecodeError, ValueError) as e:
        print(f"config is not valid JSON: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    findings = validate_config(cfg)
    _print_findings(findings, file=sys.stdout)
    if has_errors(findings):
        return EXIT_VALIDATION
    print("config ok")
    return EXIT_OK


def _cmd_verify(args):
    try:
        findings, recomputed = verify_report(args.report)
    except FileNotFoundError:
        print(f"report not found: {args.report}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ContractError, ValueError, KeyError, OSError) as e:
        print(f"verify failed: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    _print_findings(findings, file=sys.stdout)
    errors = [f for f in findings if f.level == "error"]
    if errors:
        print(f"verify FAILED: {len(errors)} mismatch(es)")
        return EXIT_VALIDATION
    print(f"verify ok: {len(recomputed)} metrics recomputed")
    return EXIT_OK


def _cmd_presets(args):
    if args.presets_command == "list":
        for name in preset_names():
            print(f"{name}: {DESCRIPTIONS[name]}")
        return EXIT_OK
    try:
        cfg = get_preset(args.name)
    except KeyError:
        print(f"unknown preset: {args.name}", file=sys.stderr)
        print("known presets: " + ", ".join(preset_names()), file=sys.stderr)
        return EXIT_VALIDATION
    print(json.dumps(cfg, indent=2))
    return EXIT_OK


def main(argv=None):
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "presets":
        return _cmd_presets(args)
    return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
