"""Case-based reasoning over past return decisions.

Retrieve - reuse - revise - retain, with a weighted normalized overlap
metric over bounded features. Similarity iterates shared feature names in
sorted order so that independently written re-implementations of the
formula produce bit-identical floats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Mapping

from . import domain
from .jsonio import dump_document

DEFAULT_TAU = 0.6
DEFAULT_K = 3
DEFAULT_DEDUP_THRESHOLD = 0.95

# Failure fallback steps down the waste hierarchy but skips redesign:
# redesign is gated on the return reason, never a condition downgrade.
_FALLBACK_CHAIN = (
    domain.Disposition.REUSE,
    domain.Disposition.RESALE,
    domain.Disposition.REPAIR,
    domain.Disposition.RECYCLE,
    domain.Disposition.DISPOSE,
)


class CbrError(Exception):
    pass


class NoSharedFeatures(CbrError):
    """The two vectors have no feature name in common (or none with weight)."""


class DuplicateId(CbrError):
    pass


class AlreadyResolved(CbrError):
    pass


class NotFound(CbrError):
    pass


class Outcome(str, Enum):
    UNKNOWN = "unknown"
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True)
class FeatureVector:
    """Problem description: symbols plus numerics clamped to [0,1]."""

    categorical: Mapping[str, str] = field(default_factory=dict)
    numeric: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        overlap = set(self.categorical) & set(self.numeric)
        if overlap:
            raise domain.ValidationFailed(
                f"feature names used both ways: {sorted(overlap)}"
            )
        clamped = {k: min(1.0, max(0.0, float(v))) for k, v in self.numeric.items()}
        object.__setattr__(self, "categorical", dict(self.categorical))
        object.__setattr__(self, "numeric", clamped)


@dataclass(frozen=True)
class SimilarityWeights:
    """Per-feature weights; names not listed default to 1.0."""

    weights: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name, w in self.weights.items():
            if w < 0:
                raise domain.ValidationFailed(f"weight for {name} must be >= 0")
        if self.weights and all(w == 0 for w in self.weights.values()):
            raise domain.ValidationFailed("at least one weight must be > 0")
        object.__setattr__(self, "weights", dict(self.weights))

    def get(self, name: str) -> float:
        return self.weights.get(name, 1.0)


UNIT_WEIGHTS = SimilarityWeights()


@dataclass(frozen=True)
class Case:
    case_id: str
    problem: FeatureVector
    solution: domain.Disposition
    outcome: Outcome = Outcome.UNKNOWN
    env_score_observed: float | None = None
    created_at: str = ""


@dataclass
class CaseBase:
    cases: list[Case] = field(default_factory=list)
    dedup_threshold: float = DEFAULT_DEDUP_THRESHOLD

    def __post_init__(self):
        if not 0.0 < self.dedup_threshold <= 1.0:
            raise domain.ValidationFailed("dedup_threshold must be in (0,1]")


# ---------------------------------------------------------------------------
# operations


def featurize(
    item: domain.ReturnedItem,
    product: domain.ProductRecord,
    materials: Mapping[str, domain.MaterialSpec],
    hazard_weights: Mapping[domain.HazardClass, float] = domain.DEFAULT_HAZARD_WEIGHTS,
) -> FeatureVector:
    """Bridge a return event and its product into the comparable feature space.

    Grades map to quarters of [0,1]; age saturates at ten years; the two
    product indices come straight from the domain formulas.
    """
    return FeatureVector(
        categorical={
            "reason": item.reason.value,
            "product_category": product.category.value,
        },
        numeric={
            "cosmetic": item.cosmetic_grade / 4,
            "functional": item.functional_grade / 4,
            "completeness": item.completeness_grade / 4,
            "age": min(item.age_months / 120, 1.0),
            "hazard": domain.hazard_index(product, materials, hazard_weights),
            "recyclability": domain.recyclability_index(product, materials),
        },
    )


def similarity(a: FeatureVector, b: FeatureVector, w: SimilarityWeights = UNIT_WEIGHTS) -> float:
    """Weighted mean of per-feature similarities over shared feature names.

    Numeric features contribute 1 - |a - b|, categorical ones an exact-match
    indicator. Raises NoSharedFeatures when nothing is comparable (or every
    shared feature carries zero weight).
    """
    shared_cat = sorted(set(a.categorical) & set(b.categorical))
    shared_num = sorted(set(a.numeric) & set(b.numeric))
    if not shared_cat and not shared_num:
        raise NoSharedFeatures("vectors share no feature names")
    total_w = 0.0
    weighted = 0.0
    for name in shared_cat:
        weight = w.get(name)
        total_w += weight
        weighted += weight * (1.0 if a.categorical[name] == b.categorical[name] else 0.0)
    for name in shared_num:
        weight = w.get(name)
        total_w += weight
        weighted += weight * (1.0 - abs(a.numeric[name] - b.numeric[name]))
    if total_w == 0.0:
        raise NoSharedFeatures("all shared features have zero weight")
    return weighted / total_w


def retrieve(
    base: CaseBase,
    query: FeatureVector,
    k: int = DEFAULT_K,
    tau: float = DEFAULT_TAU,
    w: SimilarityWeights = UNIT_WEIGHTS,
) -> list[tuple[Case, float]]:
    """Top-k cases with similarity >= tau, best first.

    Ties break toward newer created_at, then lexicographic case_id, so the
    result is fully deterministic. Cases sharing no features with the query
    simply do not qualify.
    """
    scored: list[tuple[Case, float]] = []
    for case in base.cases:
        try:
            sim = similarity(case.problem, query, w)
        except NoSharedFeatures:
            continue
        if sim >= tau:
            scored.append((case, sim))
    # Stable three-pass sort implements the tie-break exactly.
    scored.sort(key=lambda pair: pair[0].case_id)
    scored.sort(key=lambda pair: pair[0].created_at, reverse=True)
    scored.sort(key=lambda pair: pair[1], reverse=True)
    return scored[:k]


def adapt(best: Case, query: FeatureVector) -> domain.Disposition:
    """Reuse step: carry the precedent's solution over, with two revisions.

    A precedent that failed is stepped down the fallback chain; a reuse or
    resale precedent is downgraded to repair when the current item's
    functional condition does not support a like-for-like outcome.
    """
    if best.outcome is Outcome.FAILURE:
        return _next_fallback(best.solution)
    if best.solution in (domain.Disposition.REUSE, domain.Disposition.RESALE):
        if query.numeric.get("functional", 1.0) < 0.75:
            return domain.Disposition.REPAIR
    return best.solution


def _next_fallback(d: domain.Disposition) -> domain.Disposition:
    if d is domain.Disposition.REDESIGN:
        return domain.Disposition.RECYCLE
    idx = _FALLBACK_CHAIN.index(d)
    return _FALLBACK_CHAIN[min(idx + 1, len(_FALLBACK_CHAIN) - 1)]


def retain(base: CaseBase, candidate: Case) -> tuple[CaseBase, bool]:
    """Append the candidate unless a near-duplicate with the same solution exists."""
    if any(c.case_id == candidate.case_id for c in base.cases):
        raise DuplicateId(f"case {candidate.case_id} already in base")
    for case in base.cases:
        if case.solution is not candidate.solution:
            continue
        try:
            sim = similarity(case.problem, candidate.problem)
        except NoSharedFeatures:
            continue
        if sim >= base.dedup_threshold:
            return base, False
    base.cases.append(candidate)
    return base, True


def record_outcome(base: CaseBase, case_id: str, outcome: Outcome) -> CaseBase:
    """Resolve a case's outcome; allowed exactly once, unknown -> success/failure."""
    if outcome not in (Outcome.SUCCESS, Outcome.FAILURE):
        raise domain.ValidationFailed("outcome must be success or failure")
    for i, case in enumerate(base.cases):
        if case.case_id == case_id:
            if case.outcome is not Outcome.UNKNOWN:
                raise AlreadyResolved(f"case {case_id} already resolved to {case.outcome.value}")
            base.cases[i] = replace(case, outcome=outcome)
            return base
    raise NotFound(f"case {case_id} not in base")


# ---------------------------------------------------------------------------
# persistence (cases.json)


def case_to_dict(case: Case) -> dict:
    data = {
        "case_id": case.case_id,
        "problem": {
            "categorical": dict(case.problem.categorical),
            "numeric": dict(case.problem.numeric),
        },
        "solution": case.solution.value,
        "outcome": case.outcome.value,
        "created_at": case.created_at,
    }
    if case.env_score_observed is not None:
        data["env_score_observed"] = case.env_score_observed
    return data


def case_from_dict(data: dict) -> Case:
    problem = data["problem"]
    return Case(
        case_id=str(data["case_id"]),
        problem=FeatureVector(
            categorical={str(k): str(v) for k, v in problem.get("categorical", {}).items()},
            numeric={str(k): float(v) for k, v in problem.get("numeric", {}).items()},
        ),
        solution=domain.Disposition(data["solution"]),
        outcome=Outcome(data.get("outcome", "unknown")),
        env_score_observed=(
            float(data["env_score_observed"]) if "env_score_observed" in data else None
        ),
        created_at=str(data.get("created_at", "")),
    )


def case_base_to_dict(base: CaseBase) -> dict:
    return {
        "dedup_threshold": base.dedup_threshold,
        "cases": [case_to_dict(c) for c in base.cases],
    }


def case_base_from_dict(data: dict) -> CaseBase:
    return CaseBase(
        cases=[case_from_dict(c) for c in data.get("cases", [])],
        dedup_threshold=float(data.get("dedup_threshold", DEFAULT_DEDUP_THRESHOLD)),
    )


def save_case_base(base: CaseBase, path: str | Path) -> None:
    Path(path).write_text(dump_document(case_base_to_dict(base)), encoding="utf-8")


def load_case_base(path: str | Path) -> CaseBase:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return case_base_from_dict(data)
