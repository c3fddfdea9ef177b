"""End-to-end experiment: generate a synthetic return stream, replay it with
auto-accepted top dispositions, and print the sustainability report.

Usage: python3 scripts/run_scenario.py [SEED] [N_RETURNS] [OUT_DIR]
"""

from __future__ import annotations

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from relife import reporting, scenario  # noqa: E402


def main() -> None:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 42
    n_returns = int(sys.argv[2]) if len(sys.argv) > 2 else 100
    out_dir = Path(sys.argv[3]) if len(sys.argv) > 3 else ROOT / "out" / f"scenario-{seed}"

    fixture_dir = out_dir / "inputs"
    paths = scenario.generate_fixtures(seed, n_products=6, n_returns=n_returns, out_dir=fixture_dir)
    report = scenario.run_stream(
        catalog_path=paths["catalog"],
        returns_path=paths["returns"],
        ruleset_path=paths["ruleset"],
        cases_path=paths["cases"],
        report_path=out_dir / "report.json",
        trace_path=out_dir / "trace.jsonl",
        log_path=out_dir / "decision_log.jsonl",
        auto_accept_top=True,
        cases_out_path=out_dir / "cases_final.json",
    )
    print(f"outputs in {out_dir}\n")
    print(reporting.render_table(report), end="")


if __name__ == "__main__":
    main()
