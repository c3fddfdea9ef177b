"""Environmental rule evaluation and disposition scoring substrate.

Rules are threshold predicates over precomputed product metrics, not an
expression language; every advice the agents give reduces to such a
threshold. Penalties subtract from the base score so that a compliant
product scores exactly base x modifier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from . import domain
from .jsonio import dump_document

# Strict waste-hierarchy ordering; configuration defaults, never ground truth.
DEFAULT_ENV_BASE: dict[domain.Disposition, float] = {
    domain.Disposition.REUSE: 1.0,
    domain.Disposition.RESALE: 0.95,
    domain.Disposition.REPAIR: 0.85,
    domain.Disposition.REDESIGN: 0.70,
    domain.Disposition.RECYCLE: 0.60,
    domain.Disposition.DISPOSE: 0.10,
}

# Plausible secondary-revenue ordering; configurable like everything else.
DEFAULT_ECON_SCORES: dict[domain.Disposition, float] = {
    domain.Disposition.RESALE: 0.9,
    domain.Disposition.REUSE: 0.8,
    domain.Disposition.REPAIR: 0.5,
    domain.Disposition.RECYCLE: 0.3,
    domain.Disposition.REDESIGN: 0.2,
    domain.Disposition.DISPOSE: 0.0,
}

# Env weight dominant, and more than twice the econ weight, so that under
# defaults the hierarchy apex wins when nothing else discriminates.
DEFAULT_SCORE_WEIGHTS: tuple[float, float, float] = (0.6, 0.25, 0.15)

WEIGHT_SUM_TOLERANCE = 1e-9

SUBJECTS = (
    "hazard_index",
    "recyclability_index",
    "recycled_content_fraction",
    "manual_pages",
    "total_mass",
)

COMPARATORS = ("<=", ">=")


class RulesError(Exception):
    pass


class UnknownSubject(RulesError):
    pass


class InvalidWeights(RulesError):
    pass


class ParseError(RulesError):
    pass


@dataclass(frozen=True)
class EnvRule:
    """One threshold predicate: the subject metric must compare to the threshold."""

    rule_id: str
    description: str
    subject: str
    comparator: str
    threshold: float
    penalty: float

    def __post_init__(self):
        if self.subject not in SUBJECTS:
            raise UnknownSubject(f"rule {self.rule_id}: unknown subject {self.subject}")
        if self.comparator not in COMPARATORS:
            raise domain.ValidationFailed(
                f"rule {self.rule_id}: comparator must be one of {COMPARATORS}"
            )
        if not 0.0 <= self.penalty <= 1.0:
            raise domain.ValidationFailed(f"rule {self.rule_id}: penalty outside [0,1]")
        if self.threshold != self.threshold or self.threshold in (float("inf"), float("-inf")):
            raise domain.ValidationFailed(f"rule {self.rule_id}: threshold must be finite")


@dataclass
class RuleSet:
    rules: list[EnvRule] = field(default_factory=list)
    env_base: dict[domain.Disposition, float] = field(
        default_factory=lambda: dict(DEFAULT_ENV_BASE)
    )
    score_weights: tuple[float, float, float] = DEFAULT_SCORE_WEIGHTS
    econ_scores: dict[domain.Disposition, float] = field(
        default_factory=lambda: dict(DEFAULT_ECON_SCORES)
    )
    hazard_weights: dict[domain.HazardClass, float] = field(
        default_factory=lambda: dict(domain.DEFAULT_HAZARD_WEIGHTS)
    )


@dataclass(frozen=True)
class RuleOutcome:
    rule_id: str
    passed: bool
    observed: float


@dataclass(frozen=True)
class ComplianceReport:
    evaluated: tuple[RuleOutcome, ...]
    total_penalty: float
    compliant: bool


def _metric_fns(
    ruleset: RuleSet,
) -> dict[str, Callable[[domain.ProductRecord, Mapping[str, domain.MaterialSpec]], float]]:
    return {
        "hazard_index": lambda p, m: domain.hazard_index(p, m, ruleset.hazard_weights),
        "recyclability_index": domain.recyclability_index,
        "recycled_content_fraction": domain.recycled_content_fraction,
        "manual_pages": lambda p, m: float(p.manual_pages),
        "total_mass": domain.total_mass,
    }


def evaluate_rules(
    product: domain.ProductRecord,
    materials: Mapping[str, domain.MaterialSpec],
    ruleset: RuleSet,
) -> ComplianceReport:
    """Evaluate every rule against the product; penalties of failures sum, clamped at 1."""
    metrics = _metric_fns(ruleset)
    outcomes: list[RuleOutcome] = []
    penalty = 0.0
    for rule in ruleset.rules:
        try:
            observed = metrics[rule.subject](product, materials)
        except KeyError:
            raise UnknownSubject(f"rule {rule.rule_id}: cannot compute {rule.subject}")
        passed = observed <= rule.threshold if rule.comparator == "<=" else observed >= rule.threshold
        if not passed:
            penalty += rule.penalty
        outcomes.append(RuleOutcome(rule.rule_id, passed, observed))
    total_penalty = min(1.0, penalty)
    return ComplianceReport(
        evaluated=tuple(outcomes),
        total_penalty=total_penalty,
        compliant=all(o.passed for o in outcomes),
    )


def env_score(
    product: domain.ProductRecord,
    materials: Mapping[str, domain.MaterialSpec],
    d: domain.Disposition,
    ruleset: RuleSet,
) -> float:
    """Environmental score of routing this product to disposition d, in [0,1].

    base x modifier, minus the compliance penalty, floored at zero. The
    modifier ties recycling value to recyclable mass and disposal harm to
    hazardous mass; other routes are unmodified.
    """
    if d is domain.Disposition.RECYCLE:
        modifier = domain.recyclability_index(product, materials)
    elif d is domain.Disposition.DISPOSE:
        modifier = 1.0 - domain.hazard_index(product, materials, ruleset.hazard_weights)
    else:
        modifier = 1.0
    base = ruleset.env_base[d] * modifier
    report = evaluate_rules(product, materials, ruleset)
    return max(0.0, base - report.total_penalty)


# ---------------------------------------------------------------------------
# ruleset document


def compliance_to_dict(report: ComplianceReport) -> dict:
    return {
        "evaluated": [
            {"rule_id": o.rule_id, "passed": o.passed, "observed": o.observed}
            for o in report.evaluated
        ],
        "total_penalty": report.total_penalty,
        "compliant": report.compliant,
    }


def rule_to_dict(rule: EnvRule) -> dict:
    return {
        "rule_id": rule.rule_id,
        "description": rule.description,
        "subject": rule.subject,
        "comparator": rule.comparator,
        "threshold": rule.threshold,
        "penalty": rule.penalty,
    }


def ruleset_to_dict(ruleset: RuleSet) -> dict:
    w_env, w_econ, w_case = ruleset.score_weights
    return {
        "rules": [rule_to_dict(r) for r in ruleset.rules],
        "env_base": {d.value: v for d, v in ruleset.env_base.items()},
        "score_weights": {"env": w_env, "econ": w_econ, "case": w_case},
        "econ_scores": {d.value: v for d, v in ruleset.econ_scores.items()},
        "hazard_weights": {h.value: v for h, v in ruleset.hazard_weights.items()},
    }


def ruleset_from_dict(data: dict) -> RuleSet:
    if not isinstance(data, dict):
        raise ParseError("ruleset document must be a JSON object")
    try:
        rules = [
            EnvRule(
                rule_id=str(r["rule_id"]),
                description=str(r.get("description", "")),
                subject=str(r["subject"]),
                comparator=str(r["comparator"]),
                threshold=float(r["threshold"]),
                penalty=float(r["penalty"]),
            )
            for r in data.get("rules", [])
        ]
        env_base = dict(DEFAULT_ENV_BASE)
        for key, value in data.get("env_base", {}).items():
            env_base[domain.Disposition(key)] = float(value)
        econ = dict(DEFAULT_ECON_SCORES)
        for key, value in data.get("econ_scores", {}).items():
            econ[domain.Disposition(key)] = float(value)
        hazard = dict(domain.DEFAULT_HAZARD_WEIGHTS)
        for key, value in data.get("hazard_weights", {}).items():
            hazard[domain.HazardClass(key)] = float(value)
        if "score_weights" in data:
            sw = data["score_weights"]
            weights = (float(sw["env"]), float(sw["econ"]), float(sw["case"]))
        else:
            weights = DEFAULT_SCORE_WEIGHTS
    except (KeyError, ValueError, TypeError, domain.ValidationFailed, UnknownSubject) as exc:
        raise ParseError(f"malformed ruleset document: {exc}") from exc
    if any(w < 0 for w in weights):
        raise InvalidWeights(f"score weights must be >= 0, got {weights}")
    if abs(sum(weights) - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise InvalidWeights(f"score weights must sum to 1, got {weights}")
    for d in domain.Disposition:
        if not 0.0 <= env_base[d] <= 1.0:
            raise ParseError(f"env_base[{d.value}] outside [0,1]")
    return RuleSet(
        rules=rules,
        env_base=env_base,
        score_weights=weights,
        econ_scores=econ,
        hazard_weights=hazard,
    )


def load_ruleset(path: str | Path) -> RuleSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read ruleset from {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{exc.msg} (line {exc.lineno}, column {exc.colno})") from exc
    return ruleset_from_dict(data)


def save_ruleset(ruleset: RuleSet, path: str | Path) -> None:
    Path(path).write_text(dump_document(ruleset_to_dict(ruleset)), encoding="utf-8")
