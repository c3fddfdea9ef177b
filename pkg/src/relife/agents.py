"""The four lifecycle agents and the decision pipeline they form.

Inspect orchestrates: featurize the return, consult the case base, and only
when no usable precedent exists broadcast a solution request to the Recover,
Redesign and Disposal specialists. Specialists are stateless over requests;
everything they say is a pure function of the request content plus the
catalog, so replies are reproducible.

The pipeline object here is the single implementation driven by both the
HTTP service and the scenario CLI, so their outputs cannot diverge.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Callable, Mapping

from . import cbr, domain, plm, rules
from .runtime import (
    AclMessage,
    AgentId,
    AgentRole,
    AgentSystem,
    Performative,
    Topic,
)


class AgentError(Exception):
    pass


class UnknownProduct(AgentError):
    pass


class EmptyFeasibleSet(AgentError):
    pass


class NoSession(AgentError):
    pass


class InfeasibleChoice(AgentError):
    pass


class AlreadyDecided(AgentError):
    pass


class SpecialistTimeout(AgentError):
    def __init__(self, pending: list[str]):
        self.pending = pending
        super().__init__(f"specialists never replied: {', '.join(pending)}")


RATIONALE_CASE_BASED = "case-based"
RATIONALE_ESCALATION = "rule-based escalation"

_HAZARD_RANK = {
    domain.HazardClass.NONE: 0,
    domain.HazardClass.LOW: 1,
    domain.HazardClass.HIGH: 2,
}


@dataclass(frozen=True)
class RecoverySolution:
    kind: str  # repair_steps | part_reuse | material_substitution
    detail: str
    affected_components: tuple[str, ...] = ()
    substitute_material: str | None = None

    def __post_init__(self):
        if (self.kind == "material_substitution") != (self.substitute_material is not None):
            raise domain.ValidationFailed(
                "substitute_material present iff kind is material_substitution"
            )


@dataclass(frozen=True)
class RedesignAdvice:
    kind: str  # manual_redesign | recycled_content_increase | mass_reduction | disassembly_improvement
    detail: str
    target_metric: str
    suggested_delta: float

    def __post_init__(self):
        if self.target_metric not in rules.SUBJECTS:
            raise domain.ValidationFailed(
                f"target_metric {self.target_metric} not computable by the rules engine"
            )


@dataclass(frozen=True)
class DisposalPlan:
    reclaimable_components: tuple[str, ...]
    labeling_actions: tuple[tuple[str, str], ...]
    landfill_mass_g: float


@dataclass(frozen=True)
class RankedDisposition:
    """One row of a recommendation: weighted components summing to the total."""

    disposition: domain.Disposition
    total: float
    env: float
    econ: float
    case: float


@dataclass(frozen=True)
class Recommendation:
    return_id: str
    ranked: tuple[RankedDisposition, ...]
    supporting_cases: tuple[str, ...]
    recover_solutions: tuple[RecoverySolution, ...]
    redesign_advice: tuple[RedesignAdvice, ...]
    disposal_plans: tuple[DisposalPlan, ...]
    rationale: str


# ---------------------------------------------------------------------------
# disposition gates and scoring


def feasible_dispositions(
    item: domain.ReturnedItem,
    product: domain.ProductRecord,
    materials: Mapping[str, domain.MaterialSpec],
) -> set[domain.Disposition]:
    """Which destinations are physically open to this return; dispose always is."""
    feasible = {domain.Disposition.DISPOSE}
    if item.functional_grade >= 3 and item.completeness_grade >= 3:
        feasible.add(domain.Disposition.REUSE)
    if item.functional_grade >= 3 and item.cosmetic_grade >= 2:
        feasible.add(domain.Disposition.RESALE)
    if item.functional_grade >= 1 and any(
        c.replaceable for c in domain.iter_components(product.bom)
    ):
        feasible.add(domain.Disposition.REPAIR)
    if domain.recyclability_index(product, materials) > 0:
        feasible.add(domain.Disposition.RECYCLE)
    if item.reason in (
        domain.ReturnReason.USAGE_CONFUSION,
        domain.ReturnReason.CUSTOMER_DISSATISFACTION,
    ):
        feasible.add(domain.Disposition.REDESIGN)
    return feasible


def score_dispositions(
    feasible: set[domain.Disposition],
    item: domain.ReturnedItem,
    product: domain.ProductRecord,
    materials: Mapping[str, domain.MaterialSpec],
    ruleset: rules.RuleSet,
    case_support: Mapping[domain.Disposition, float],
) -> list[RankedDisposition]:
    """Rank feasible dispositions by weighted env/econ/case total, descending.

    Exact ties fall back to the waste-hierarchy order, which makes the
    ranking deterministic for identical inputs.
    """
    if not feasible:
        raise EmptyFeasibleSet("no feasible dispositions to score")
    w_env, w_econ, w_case = ruleset.score_weights
    rows = []
    for d in sorted(feasible, key=domain.hierarchy_rank):
        env_component = w_env * rules.env_score(product, materials, d, ruleset)
        econ_component = w_econ * ruleset.econ_scores[d]
        case_component = w_case * case_support.get(d, 0.0)
        rows.append(
            RankedDisposition(
                disposition=d,
                total=env_component + econ_component + case_component,
                env=env_component,
                econ=econ_component,
                case=case_component,
            )
        )
    # stable sort on top of hierarchy order = hierarchy tie-break
    rows.sort(key=lambda r: r.total, reverse=True)
    return rows


# ---------------------------------------------------------------------------
# specialist behaviours (pure functions of request content + catalog)


def recover_handle(
    item: domain.ReturnedItem,
    product: domain.ProductRecord,
    catalog: plm.Catalog,
) -> list[RecoverySolution]:
    """Everything the Recover agent knows about bringing this product back."""
    solutions: list[RecoverySolution] = []
    replaceable = [c for c in domain.iter_components(product.bom) if c.replaceable]
    if item.functional_grade < 3:
        for comp in replaceable:
            solutions.append(
                RecoverySolution(
                    kind="repair_steps",
                    detail=f"repair or replace {comp.name}",
                    affected_components=(comp.component_id,),
                )
            )
    if item.completeness_grade >= 2:
        for comp in replaceable:
            solutions.append(
                RecoverySolution(
                    kind="part_reuse",
                    detail=f"harvest {comp.name} for reuse",
                    affected_components=(comp.component_id,),
                )
            )
    for mid in sorted(set(domain.iter_material_occurrences(product.bom))):
        spec = catalog.materials[mid]
        if spec.hazard_class is not domain.HazardClass.HIGH:
            continue
        candidates = [
            m
            for m in catalog.materials.values()
            if m.category is spec.category
            and _HAZARD_RANK[m.hazard_class] < _HAZARD_RANK[spec.hazard_class]
        ]
        if not candidates:
            continue
        substitute = min(candidates, key=lambda m: (_HAZARD_RANK[m.hazard_class], m.material_id))
        affected = tuple(
            c.component_id
            for c in domain.iter_components(product.bom)
            if mid in c.materials
        )
        solutions.append(
            RecoverySolution(
                kind="material_substitution",
                detail=f"substitute {spec.name} with {substitute.name}",
                affected_components=affected,
                substitute_material=substitute.material_id,
            )
        )
    return solutions


def redesign_handle(
    item: domain.ReturnedItem,
    product: domain.ProductRecord,
    catalog: plm.Catalog,
    disassembly_threshold_s: float = 300.0,
) -> list[RedesignAdvice]:
    """Design-side advice; each trigger reduces to a threshold on a product metric."""
    materials = catalog.materials
    advice: list[RedesignAdvice] = []
    if item.reason is domain.ReturnReason.USAGE_CONFUSION and product.has_user_manual:
        advice.append(
            RedesignAdvice(
                kind="manual_redesign",
                detail="rework the user manual; returns indicate customers cannot operate the product",
                target_metric="manual_pages",
                suggested_delta=-product.manual_pages / 2,
            )
        )
    recycled = domain.recycled_content_fraction(product, materials)
    if recycled < 0.5:
        advice.append(
            RedesignAdvice(
                kind="recycled_content_increase",
                detail=f"recycled content is {recycled:.2f}; raise it to at least 0.50",
                target_metric="recycled_content_fraction",
                suggested_delta=0.5 - recycled,
            )
        )
    mass = domain.total_mass(product, materials)
    peers = [p for p in catalog.products.values() if p.category is product.category]
    median_mass = statistics.median(domain.total_mass(p, materials) for p in peers)
    if mass > median_mass:
        advice.append(
            RedesignAdvice(
                kind="mass_reduction",
                detail=f"mass {mass:.0f} g exceeds the {product.category.value} median {median_mass:.0f} g",
                target_metric="total_mass",
                suggested_delta=median_mass - mass,
            )
        )
    disassembly = domain.total_disassembly_time(product)
    if disassembly > disassembly_threshold_s:
        advice.append(
            RedesignAdvice(
                kind="disassembly_improvement",
                detail=(
                    f"disassembly takes {disassembly:.0f} s (threshold "
                    f"{disassembly_threshold_s:.0f} s); easier teardown feeds recycling"
                ),
                target_metric="recyclability_index",
                suggested_delta=0.1,
            )
        )
    return advice


def disposal_handle(
    item: domain.ReturnedItem,
    product: domain.ProductRecord,
    materials: Mapping[str, domain.MaterialSpec],
) -> DisposalPlan:
    """Reclaim what can be reclaimed, label the rest, tally the landfill mass."""
    reclaimable: list[str] = []
    reclaimable_mass = 0.0
    for comp in domain.iter_components(product.bom):
        if comp.replaceable and all(materials[mid].recyclable for mid in comp.materials):
            reclaimable.append(comp.component_id)
            reclaimable_mass += sum(materials[mid].mass_g for mid in comp.materials)
    occurrences = list(domain.iter_material_occurrences(product.bom))
    recyclable_mass = sum(materials[mid].mass_g for mid in occurrences if materials[mid].recyclable)
    by_category: dict[domain.MaterialCategory, str] = {}
    for mid in occurrences:
        category = materials[mid].category
        if category not in by_category or mid < by_category[category]:
            by_category[category] = mid
    labeling = tuple(
        (by_category[category], category.value)
        for category in sorted(by_category, key=lambda c: c.value)
    )
    total = domain.total_mass(product, materials)
    return DisposalPlan(
        reclaimable_components=tuple(reclaimable),
        labeling_actions=labeling,
        landfill_mass_g=max(0.0, total - reclaimable_mass - recyclable_mass),
    )


# ---------------------------------------------------------------------------
# message plumbing


def _request_content(item: domain.ReturnedItem, product: domain.ProductRecord) -> dict:
    return {
        "item": domain.returned_item_to_dict(item),
        "product": domain.product_to_dict(product),
    }


def _parse_request(msg: AclMessage) -> tuple[domain.ReturnedItem, domain.ProductRecord]:
    return (
        domain.returned_item_from_dict(msg.content["item"]),
        domain.product_from_dict(msg.content["product"]),
    )


def recovery_solution_to_dict(sol: RecoverySolution) -> dict:
    return {
        "kind": sol.kind,
        "detail": sol.detail,
        "affected_components": list(sol.affected_components),
        "substitute_material": sol.substitute_material,
    }


def redesign_advice_to_dict(adv: RedesignAdvice) -> dict:
    return {
        "kind": adv.kind,
        "detail": adv.detail,
        "target_metric": adv.target_metric,
        "suggested_delta": adv.suggested_delta,
    }


def disposal_plan_to_dict(plan: DisposalPlan) -> dict:
    return {
        "reclaimable_components": list(plan.reclaimable_components),
        "labeling_actions": [[mid, label] for mid, label in plan.labeling_actions],
        "landfill_mass_g": plan.landfill_mass_g,
    }


def ranked_to_dict(row: RankedDisposition) -> dict:
    return {
        "disposition": row.disposition.value,
        "total": row.total,
        "env": row.env,
        "econ": row.econ,
        "case": row.case,
    }


def recommendation_to_dict(rec: Recommendation) -> dict:
    return {
        "return_id": rec.return_id,
        "ranked": [ranked_to_dict(r) for r in rec.ranked],
        "supporting_cases": list(rec.supporting_cases),
        "specialist_solutions": {
            "recover": [recovery_solution_to_dict(s) for s in rec.recover_solutions],
            "redesign": [redesign_advice_to_dict(a) for a in rec.redesign_advice],
            "disposal": [disposal_plan_to_dict(p) for p in rec.disposal_plans],
        },
        "rationale": rec.rationale,
    }


def make_recover_agent(catalog: plm.Catalog) -> Callable:
    def handle(system: AgentSystem, self_id: AgentId, msg: AclMessage) -> None:
        if msg.performative is not Performative.REQUEST:
            return
        if msg.topic is not Topic.SOLUTION_REQUEST:
            if msg.reply_with is not None:
                system.reply(msg, self_id, Performative.NOT_UNDERSTOOD, {"error": "unsupported topic"})
            return
        item, product = _parse_request(msg)
        solutions = recover_handle(item, product, catalog)
        system.reply(
            msg,
            self_id,
            Performative.INFORM,
            {"solutions": [recovery_solution_to_dict(s) for s in solutions]},
            topic=Topic.SOLUTION_REPLY,
        )

    return handle


def make_redesign_agent(catalog: plm.Catalog, disassembly_threshold_s: float) -> Callable:
    def handle(system: AgentSystem, self_id: AgentId, msg: AclMessage) -> None:
        if msg.performative is not Performative.REQUEST:
            return
        if msg.topic is not Topic.SOLUTION_REQUEST:
            if msg.reply_with is not None:
                system.reply(msg, self_id, Performative.NOT_UNDERSTOOD, {"error": "unsupported topic"})
            return
        item, product = _parse_request(msg)
        advice = redesign_handle(item, product, catalog, disassembly_threshold_s)
        system.reply(
            msg,
            self_id,
            Performative.INFORM,
            {"solutions": [redesign_advice_to_dict(a) for a in advice]},
            topic=Topic.SOLUTION_REPLY,
        )

    return handle


def make_disposal_agent(catalog: plm.Catalog) -> Callable:
    def handle(system: AgentSystem, self_id: AgentId, msg: AclMessage) -> None:
        if msg.performative is not Performative.REQUEST:
            return
        if msg.topic is not Topic.SOLUTION_REQUEST:
            if msg.reply_with is not None:
                system.reply(msg, self_id, Performative.NOT_UNDERSTOOD, {"error": "unsupported topic"})
            return
        item, product = _parse_request(msg)
        plan = disposal_handle(item, product, catalog.materials)
        system.reply(
            msg,
            self_id,
            Performative.INFORM,
            {"plan": disposal_plan_to_dict(plan)},
            topic=Topic.SOLUTION_REPLY,
        )

    return handle


# ---------------------------------------------------------------------------
# the inspect pipeline


@dataclass
class PipelineConfig:
    k: int = cbr.DEFAULT_K
    tau: float = cbr.DEFAULT_TAU
    similarity_weights: cbr.SimilarityWeights = field(default_factory=cbr.SimilarityWeights)
    step_budget: int = 10_000
    disassembly_threshold_s: float = 300.0


@dataclass
class EvaluationSession:
    item: domain.ReturnedItem
    features: cbr.FeatureVector
    recommendation: Recommendation
    decided: bool = False


class InspectPipeline:
    """Orchestrates a return through featurize -> CBR -> escalation -> scoring.

    One instance owns the four registered agents plus references to the
    shared stores; the service and the CLI both drive returns through here.
    """

    def __init__(
        self,
        catalog: plm.Catalog,
        case_base: cbr.CaseBase,
        ruleset: rules.RuleSet,
        decision_log: plm.DecisionLog,
        config: PipelineConfig | None = None,
        clock: Callable[[], str] | None = None,
    ):
        from .timeutil import wall_clock

        self.catalog = catalog
        self.case_base = case_base
        self.ruleset = ruleset
        self.decision_log = decision_log
        self.config = config or PipelineConfig()
        self.clock = clock or wall_clock
        self.system = AgentSystem()
        self.inspect_id = AgentId("inspect", AgentRole.INSPECT)
        self.recover_id = AgentId("recover", AgentRole.RECOVER)
        self.redesign_id = AgentId("redesign", AgentRole.REDESIGN)
        self.disposal_id = AgentId("disposal", AgentRole.DISPOSAL)
        self.system.register(self.inspect_id, self._inspect_handler)
        self.system.register(self.recover_id, make_recover_agent(catalog))
        self.system.register(
            self.redesign_id, make_redesign_agent(catalog, self.config.disassembly_threshold_s)
        )
        self.system.register(self.disposal_id, make_disposal_agent(catalog))
        self._collected: dict[str, dict] = {}
        self._sessions: dict[str, EvaluationSession] = {}
        self._next_case = self._seed_case_counter()

    def _seed_case_counter(self) -> int:
        highest = 0
        for case in self.case_base.cases:
            if case.case_id.startswith("case-"):
                suffix = case.case_id[5:]
                if suffix.isdigit():
                    highest = max(highest, int(suffix))
        return highest + 1

    def _inspect_handler(self, system: AgentSystem, self_id: AgentId, msg: AclMessage) -> None:
        """Collect specialist replies keyed by conversation; everything else is noise."""
        bucket = self._collected.setdefault(
            msg.conversation_id, {"recover": [], "redesign": [], "disposal": [], "failures": {}}
        )
        if msg.performative is Performative.INFORM and msg.topic is Topic.SOLUTION_REPLY:
            role = msg.sender.role
            if role is AgentRole.RECOVER:
                bucket["recover"] = [
                    RecoverySolution(
                        kind=s["kind"],
                        detail=s["detail"],
                        affected_components=tuple(s.get("affected_components", [])),
                        substitute_material=s.get("substitute_material"),
                    )
                    for s in msg.content.get("solutions", [])
                ]
            elif role is AgentRole.REDESIGN:
                bucket["redesign"] = [
                    RedesignAdvice(
                        kind=a["kind"],
                        detail=a["detail"],
                        target_metric=a["target_metric"],
                        suggested_delta=float(a["suggested_delta"]),
                    )
                    for a in msg.content.get("solutions", [])
                ]
            elif role is AgentRole.DISPOSAL:
                plan = msg.content.get("plan")
                if plan is not None:
                    bucket["disposal"] = [
                        DisposalPlan(
                            reclaimable_components=tuple(plan["reclaimable_components"]),
                            labeling_actions=tuple(
                                (mid, label) for mid, label in plan["labeling_actions"]
                            ),
                            landfill_mass_g=float(plan["landfill_mass_g"]),
                        )
                    ]
        elif msg.performative in (Performative.FAILURE, Performative.REFUSE):
            bucket["failures"][msg.sender.name] = msg.content

    def get_session(self, return_id: str) -> EvaluationSession | None:
        return self._sessions.get(return_id)

    def inspect_evaluate(self, item: domain.ReturnedItem) -> Recommendation:
        domain.validate_returned_item(item)
        try:
            product = self.catalog.get_product(item.product_id)
        except plm.NotFound:
            raise UnknownProduct(f"return {item.return_id}: unknown product {item.product_id}")
        materials = self.catalog.materials
        features = cbr.featurize(item, product, materials, self.ruleset.hazard_weights)
        hits = cbr.retrieve(
            self.case_base,
            features,
            k=self.config.k,
            tau=self.config.tau,
            w=self.config.similarity_weights,
        )

        case_support: dict[domain.Disposition, float] = {}
        supporting: tuple[str, ...] = ()
        recover_solutions: tuple[RecoverySolution, ...] = ()
        redesign_advice: tuple[RedesignAdvice, ...] = ()
        disposal_plans: tuple[DisposalPlan, ...] = ()

        if hits and hits[0][0].outcome is not cbr.Outcome.FAILURE:
            best, best_similarity = hits[0]
            adapted = cbr.adapt(best, features)
            case_support = {adapted: best_similarity}
            supporting = tuple(case.case_id for case, _ in hits)
            rationale = RATIONALE_CASE_BASED
        else:
            conversation_id = self.system.broadcast_request(
                self.inspect_id,
                Topic.SOLUTION_REQUEST,
                _request_content(item, product),
                [self.recover_id, self.redesign_id, self.disposal_id],
            )
            self.system.run_until_idle(self.config.step_budget)
            conversation = self.system.conversations[conversation_id]
            if conversation.pending:
                raise SpecialistTimeout(sorted(conversation.pending))
            bucket = self._collected.pop(
                conversation_id,
                {"recover": [], "redesign": [], "disposal": [], "failures": {}},
            )
            recover_solutions = tuple(bucket["recover"])
            redesign_advice = tuple(bucket["redesign"])
            disposal_plans = tuple(bucket["disposal"])
            rationale = RATIONALE_ESCALATION

        feasible = feasible_dispositions(item, product, materials)
        ranked = score_dispositions(
            feasible, item, product, materials, self.ruleset, case_support
        )
        recommendation = Recommendation(
            return_id=item.return_id,
            ranked=tuple(ranked),
            supporting_cases=supporting,
            recover_solutions=recover_solutions,
            redesign_advice=redesign_advice,
            disposal_plans=disposal_plans,
            rationale=rationale,
        )
        self._sessions[item.return_id] = EvaluationSession(
            item=item, features=features, recommendation=recommendation
        )
        return recommendation

    def confirm_decision(
        self, return_id: str, chosen: domain.Disposition
    ) -> plm.DecisionLogEntry:
        """Close the loop: retain the case, log the decision, advance the stage."""
        session = self._sessions.get(return_id)
        if session is None:
            raise NoSession(f"no evaluated session for return {return_id}")
        if session.decided:
            raise AlreadyDecided(f"return {return_id} already decided")
        rank = next(
            (
                i + 1
                for i, row in enumerate(session.recommendation.ranked)
                if row.disposition is chosen
            ),
            None,
        )
        if rank is None:
            raise InfeasibleChoice(
                f"{chosen.value} was not in the feasible set for return {return_id}"
            )
        product = self.catalog.get_product(session.item.product_id)
        materials = self.catalog.materials
        raw_env = rules.env_score(product, materials, chosen, self.ruleset)

        case_id = self._fresh_case_id()
        cbr.retain(
            self.case_base,
            cbr.Case(
                case_id=case_id,
                problem=session.features,
                solution=chosen,
                outcome=cbr.Outcome.UNKNOWN,
                env_score_observed=raw_env,
                created_at=self.clock(),
            ),
        )

        landfill = 0.0
        if chosen is domain.Disposition.DISPOSE:
            landfill = disposal_handle(session.item, product, materials).landfill_mass_g
        entry = plm.DecisionLogEntry(
            sequence=self.decision_log.next_sequence,
            timestamp=self.clock(),
            return_id=return_id,
            product_id=product.product_id,
            chosen=chosen,
            recommendation_rank_of_chosen=rank,
            env_score_of_chosen=raw_env,
            landfill_mass_g=landfill,
        )
        self.decision_log.append(entry)

        target = (
            domain.LifecycleStage.DISPOSAL
            if chosen is domain.Disposition.DISPOSE
            else domain.LifecycleStage.RECOVERY
        )
        path = domain.stage_path(product.lifecycle_stage, target)
        if path is not None and len(path) > 1:
            moved = product
            for stage in path[1:]:
                moved = domain.advance_stage(moved, stage)
            self.catalog.upsert_product(moved)

        session.decided = True
        return entry

    def _fresh_case_id(self) -> str:
        existing = {c.case_id for c in self.case_base.cases}
        while True:
            case_id = f"case-{self._next_case:06d}"
            self._next_case += 1
            if case_id not in existing:
                return case_id
