"""
Soliton Lab - Command Line Frontend

    python app.py run <config>
    python app.py sweep <config> --param c=1.30:1.41:0.01
    python app.py verify <bundle>
"""

import argparse
import sys
from typing import List, Optional

from rich.console import Console
from rich.table import Table

from src import __version__
from src.config import settings
from src.errors import SolitonLabError
from src.experiments import ExperimentLab, load_config, verify_bundle
from src.observability import configure_logging
from src.utils import acceptance_table, format_results, parse_sweep

console = Console()


def cmd_run(args: argparse.Namespace) -> int:
    """Run one config and print its acceptance block"""
    config = load_config(args.config)
    lab = ExperimentLab(args.output_root)
    outcome = lab.run(config, args.out)
    console.print(acceptance_table(outcome["acceptance"]))
    console.print(format_results(outcome))
    return 0 if outcome["status"] == "PASS" else 1


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run one config per parameter value"""
    config = load_config(args.config)
    key, values = parse_sweep(args.param)
    lab = ExperimentLab(args.output_root)
    outcomes = lab.sweep(config, key, values, args.out)

    table = Table(title=f"sweep {key} ({len(outcomes)} runs)")
    table.add_column("param")
    table.add_column("status")
    table.add_column("bundle / error")
    for outcome in outcomes:
        style = "green" if outcome["status"] == "PASS" else "red"
        table.add_row(outcome["param"], f"[{style}]{outcome['status']}[/{style}]",
                      outcome.get("bundle") or outcome.get("error") or "")
    console.print(table)
    return 0 if all(o["status"] == "PASS" for o in outcomes) else 1


def cmd_verify(args: argparse.Namespace) -> int:
    """Check a bundle's completeness and acceptance consistency"""
    report = verify_bundle(args.bundle)
    if report.get("missing"):
        console.print(f"[red]Missing files:[/red] {', '.join(report['missing'])}")
        return 1
    for problem in report["problems"]:
        console.print(f"[red]Problem:[/red] {problem}")
    console.print(f"{report['preset']} bundle v{report['version']}: {report['status']}, "
                  f"{'valid' if report['valid'] else 'invalid'}")
    return 0 if report["valid"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="soliton-lab", description="Dark-soliton stability experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help=f"Log level (default {settings.log_level})")
    parser.add_argument("--log-json", default=None, help="Also write structured JSON logs to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run one experiment config")
    run.add_argument("config")
    run.add_argument("--out", default=None, help="Bundle directory (default under the output root)")
    run.add_argument("--output-root", default=None, help=f"Output root (default {settings.output_root})")
    run.set_defaults(handler=cmd_run)

    sweep = commands.add_parser("sweep", help="Run a config over a parameter range")
    sweep.add_argument("config")
    sweep.add_argument("--param", required=True, help="key=start:stop:step or key=v1,v2,...")
    sweep.add_argument("--out", default=None, help="Parent directory of the per-value bundles")
    sweep.add_argument("--output-root", default=None, help=f"Output root (default {settings.output_root})")
    sweep.set_defaults(handler=cmd_sweep)

    verify = commands.add_parser("verify", help="Verify an artifact bundle")
    verify.add_argument("bundle")
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_json)
    try:
        return args.handler(args)
    except SolitonLabError as e:
        console.print(f"[red]Error [{e.module}]:[/red] {e.message}")
        for key, value in e.to_dict()["context"].items():
            console.print(f"  {key}: {value}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
