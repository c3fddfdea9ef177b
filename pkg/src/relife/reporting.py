"""Sustainability reporting: a pure fold over the decision log.

Recomputing the report from a reloaded log must give the same numbers as
the live service, so nothing here reads any store except the entries."""

from __future__ import annotations

from dataclasses import dataclass

from . import domain, plm


@dataclass(frozen=True)
class SustainabilityReport:
    window_from: str | None
    window_to: str | None
    total_returns: int
    recovery_rate: float | None  # absent (None) when nothing was decided
    landfill_mass_g: float
    mean_env_score: float | None
    per_disposition_counts: dict[domain.Disposition, int]


def sustainability_report(entries: list[plm.DecisionLogEntry]) -> SustainabilityReport:
    counts = {d: 0 for d in domain.Disposition}
    for entry in entries:
        counts[entry.chosen] += 1
    decided = len(entries)
    dispose_count = counts[domain.Disposition.DISPOSE]
    return SustainabilityReport(
        window_from=entries[0].timestamp if entries else None,
        window_to=entries[-1].timestamp if entries else None,
        total_returns=decided,
        recovery_rate=None if decided == 0 else 1.0 - dispose_count / decided,
        landfill_mass_g=sum(entry.landfill_mass_g for entry in entries),
        mean_env_score=(
            None if decided == 0 else sum(e.env_score_of_chosen for e in entries) / decided
        ),
        per_disposition_counts=counts,
    )


def report_to_dict(report: SustainabilityReport) -> dict:
    return {
        "window": {"from": report.window_from, "to": report.window_to},
        "total_returns": report.total_returns,
        "recovery_rate": report.recovery_rate,
        "landfill_mass_g": report.landfill_mass_g,
        "mean_env_score": report.mean_env_score,
        "per_disposition_counts": {
            d.value: report.per_disposition_counts[d] for d in domain.Disposition
        },
    }


def render_table(report: SustainabilityReport) -> str:
    """Plain-text rendering: one row per disposition plus the aggregates."""
    lines = [f"{'disposition':<12} count"]
    for d in domain.Disposition:
        lines.append(f"{d.value:<12} {report.per_disposition_counts[d]:>5}")
    lines.append("")
    lines.append(f"total returns   : {report.total_returns}")
    rate = "n/a" if report.recovery_rate is None else f"{report.recovery_rate:.4f}"
    lines.append(f"recovery rate   : {rate}")
    lines.append(f"landfill mass g : {report.landfill_mass_g:.1f}")
    mean = "n/a" if report.mean_env_score is None else f"{report.mean_env_score:.4f}"
    lines.append(f"mean env score  : {mean}")
    return "\n".join(lines) + "\n"
