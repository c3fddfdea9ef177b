"""Scenario CLI: seed fixtures, replay return streams, render reports.

Exit codes: 0 success, 1 pipeline error, 2 usage error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import plm, reporting, scenario
from .jsonio import dump_document


@click.group()
def main():
    """Batch driver for the returns decision platform."""


@main.command()
@click.option("--seed", type=click.IntRange(min=1), required=True, help="PRNG seed.")
@click.option("--products", "n_products", type=click.IntRange(min=1), required=True)
@click.option("--returns", "n_returns", type=click.IntRange(min=1), required=True)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
def generate(seed, n_products, n_returns, out_dir):
    """Write a deterministic catalog + return stream under OUT."""
    paths = scenario.generate_fixtures(seed, n_products, n_returns, out_dir)
    for name, path in paths.items():
        click.echo(f"{name}: {path}")


@main.command(name="run")
@click.option("--catalog", "catalog_path", type=click.Path(dir_okay=False), required=True)
@click.option("--returns", "returns_path", type=click.Path(dir_okay=False), required=True)
@click.option("--ruleset", "ruleset_path", type=click.Path(dir_okay=False), required=True)
@click.option("--cases", "cases_path", type=click.Path(dir_okay=False), required=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), required=True)
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False), required=True)
@click.option("--log", "log_path", type=click.Path(dir_okay=False), default=None,
              help="Decision log output (default: decision_log.jsonl beside the report).")
@click.option("--cases-out", "cases_out_path", type=click.Path(dir_okay=False), default=None,
              help="Where to write the grown case base (input file is never modified).")
@click.option("--auto-accept-top", is_flag=True, help="Confirm the top-ranked disposition.")
def run_command(catalog_path, returns_path, ruleset_path, cases_path,
                report_path, trace_path, log_path, cases_out_path, auto_accept_top):
    """Replay a return stream through the full pipeline without HTTP."""
    if log_path is None:
        log_path = str(Path(report_path).parent / "decision_log.jsonl")
    outputs = [report_path, trace_path, log_path]
    if cases_out_path:
        outputs.append(cases_out_path)
    try:
        report = scenario.run_stream(
            catalog_path=catalog_path,
            returns_path=returns_path,
            ruleset_path=ruleset_path,
            cases_path=cases_path,
            report_path=report_path,
            trace_path=trace_path,
            log_path=log_path,
            auto_accept_top=auto_accept_top,
            cases_out_path=cases_out_path,
        )
    except Exception as exc:  # pipeline error: clean partial outputs, exit 1
        for path in outputs:
            Path(path).unlink(missing_ok=True)
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"evaluated {report.total_returns} decided returns -> {report_path}")


@main.command(name="report")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), required=True)
@click.option("--format", "output_format", type=click.Choice(["table", "json"]), default="table")
def report_command(log_path, output_format):
    """Recompute the sustainability report from a decision log."""
    try:
        entries = plm.read_log_entries(log_path)
    except plm.PlmError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    report = reporting.sustainability_report(entries)
    if output_format == "json":
        click.echo(dump_document(reporting.report_to_dict(report)), nl=False)
    else:
        click.echo(reporting.render_table(report), nl=False)


if __name__ == "__main__":
    main()
