"""HTTP facade over the agent system.

Return intake, recommendations, what-if scoring, confirmation, reporting.
All agent work happens synchronously inside request handling (desk-scale
loads; determinism beats throughput). State-mutating commands are
serialized through one lock; reads serve stored snapshots, which is what
makes repeated GETs byte-identical.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse

from . import agents, cbr, domain, plm, reporting, rules
from .agents import InspectPipeline, PipelineConfig
from .timeutil import LogicalClock, wall_clock

DEFAULT_CONFIG_PATH = "config/service.json"
CONFIG_ENV_VAR = "RELIFE_CONFIG"


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    catalog_path: str = "data/catalog.json"
    cases_path: str = "data/cases.json"
    decision_log_path: str = "data/decision_log.jsonl"
    ruleset_path: str = "config/ruleset.default.json"
    k: int = cbr.DEFAULT_K
    tau: float = cbr.DEFAULT_TAU
    dedup_threshold: float = cbr.DEFAULT_DEDUP_THRESHOLD
    similarity_weights: dict[str, float] = field(default_factory=dict)
    step_budget: int = 10_000
    disassembly_threshold_s: float = 300.0
    clock: str = "logical"  # logical | wall


def load_service_config(path: str | Path | None = None) -> ServiceConfig:
    """Read the service configuration; RELIFE_CONFIG overrides the path."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR, DEFAULT_CONFIG_PATH)
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    cbr_section = data.get("cbr", {})
    return ServiceConfig(
        host=data.get("host", "127.0.0.1"),
        port=int(data.get("port", 8000)),
        catalog_path=data.get("catalog_path", "data/catalog.json"),
        cases_path=data.get("cases_path", "data/cases.json"),
        decision_log_path=data.get("decision_log_path", "data/decision_log.jsonl"),
        ruleset_path=data.get("ruleset_path", "config/ruleset.default.json"),
        k=int(cbr_section.get("k", cbr.DEFAULT_K)),
        tau=float(cbr_section.get("tau", cbr.DEFAULT_TAU)),
        dedup_threshold=float(cbr_section.get("dedup_threshold", cbr.DEFAULT_DEDUP_THRESHOLD)),
        similarity_weights={
            str(k_): float(v) for k_, v in cbr_section.get("weights", {}).items()
        },
        step_budget=int(data.get("step_budget", 10_000)),
        disassembly_threshold_s=float(data.get("disassembly_threshold_s", 300.0)),
        clock=data.get("clock", "logical"),
    )


@dataclass
class Session:
    return_id: str
    state: str  # pending -> recommended -> decided
    item: domain.ReturnedItem
    recommendation: dict | None = None
    decided: domain.Disposition | None = None

    def to_dict(self) -> dict:
        return {
            "return_id": self.return_id,
            "state": self.state,
            "item": domain.returned_item_to_dict(self.item),
            "recommendation": self.recommendation,
            "decided": self.decided.value if self.decided else None,
        }


class ServiceState:
    """Everything one running service owns; built once at startup."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.catalog = plm.load_catalog(config.catalog_path)
        if Path(config.cases_path).exists():
            self.case_base = cbr.load_case_base(config.cases_path)
        else:
            self.case_base = cbr.CaseBase(dedup_threshold=config.dedup_threshold)
        self.ruleset = rules.load_ruleset(config.ruleset_path)
        self.decision_log = plm.DecisionLog(config.decision_log_path)
        clock = LogicalClock() if config.clock == "logical" else wall_clock
        self.pipeline = InspectPipeline(
            catalog=self.catalog,
            case_base=self.case_base,
            ruleset=self.ruleset,
            decision_log=self.decision_log,
            config=PipelineConfig(
                k=config.k,
                tau=config.tau,
                similarity_weights=cbr.SimilarityWeights(config.similarity_weights),
                step_budget=config.step_budget,
                disassembly_threshold_s=config.disassembly_threshold_s,
            ),
            clock=clock,
        )
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()

    def persist(self) -> None:
        cbr.save_case_base(self.case_base, self.config.cases_path)
        plm.save_catalog(self.catalog, self.config.catalog_path)


def _error(status: int, code: str, message: str, detail=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _parse_disposition(body: dict) -> domain.Disposition | None:
    try:
        return domain.Disposition(body.get("disposition"))
    except (ValueError, TypeError, AttributeError):
        return None


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="relife decision service", version="0.1.0")

    @app.post("/returns", status_code=201)
    def intake_return(body: dict = Body(...)):
        try:
            item = domain.returned_item_from_dict(body)
        except domain.ValidationFailed as exc:
            return _error(400, "validation_failed", "invalid return document", str(exc))
        with state.lock:
            if item.return_id in state.sessions:
                return _error(409, "duplicate_return", f"return {item.return_id} already exists")
            try:
                state.catalog.get_product(item.product_id)
            except plm.NotFound:
                return _error(404, "unknown_product", f"product {item.product_id} not in catalog")
            session = Session(return_id=item.return_id, state="pending", item=item)
            state.sessions[item.return_id] = session
            return session.to_dict()

    @app.get("/returns")
    def list_returns(limit: int | None = None):
        sessions = [s.to_dict() for s in state.sessions.values()]
        if limit is not None:
            sessions = sessions[:limit]
        return {"returns": sessions}

    @app.get("/returns/{return_id}")
    def get_return(return_id: str):
        session = state.sessions.get(return_id)
        if session is None:
            return _error(404, "not_found", f"no session for return {return_id}")
        return session.to_dict()

    @app.get("/returns/{return_id}/recommendation")
    def get_recommendation(return_id: str):
        session = state.sessions.get(return_id)
        if session is None:
            return _error(404, "not_found", f"no session for return {return_id}")
        with state.lock:
            if session.state == "pending":
                try:
                    recommendation = state.pipeline.inspect_evaluate(session.item)
                except agents.UnknownProduct as exc:
                    return _error(404, "unknown_product", str(exc))
                except agents.SpecialistTimeout as exc:
                    return _error(503, "specialist_timeout", str(exc))
                except Exception as exc:
                    from .runtime import BudgetExhausted

                    if isinstance(exc, BudgetExhausted):
                        return _error(503, "budget_exhausted", str(exc))
                    raise
                body = agents.recommendation_to_dict(recommendation)
                # the console renders rule violations alongside the ranking
                product = state.catalog.get_product(session.item.product_id)
                body["compliance"] = rules.compliance_to_dict(
                    rules.evaluate_rules(product, state.catalog.materials, state.ruleset)
                )
                session.recommendation = body
                session.state = "recommended"
        return session.recommendation

    @app.post("/returns/{return_id}/whatif")
    def whatif(return_id: str, body: dict = Body(...)):
        session = state.sessions.get(return_id)
        if session is None:
            return _error(404, "not_found", f"no session for return {return_id}")
        if session.recommendation is None:
            return _error(404, "no_recommendation", "recommendation not computed yet")
        disposition = _parse_disposition(body)
        if disposition is None:
            return _error(400, "validation_failed", "body must carry a disposition")
        for row in session.recommendation["ranked"]:
            if row["disposition"] == disposition.value:
                return row
        return _error(
            422, "infeasible_disposition",
            f"{disposition.value} is not feasible for return {return_id}",
        )

    @app.post("/returns/{return_id}/decision")
    def decide(return_id: str, body: dict = Body(...)):
        session = state.sessions.get(return_id)
        if session is None:
            return _error(404, "not_found", f"no session for return {return_id}")
        disposition = _parse_disposition(body)
        if disposition is None:
            return _error(400, "validation_failed", "body must carry a disposition")
        with state.lock:
            if session.state == "decided":
                return _error(409, "already_decided", f"return {return_id} already decided")
            if session.state != "recommended":
                return _error(
                    409, "not_recommended", "fetch the recommendation before deciding"
                )
            try:
                entry = state.pipeline.confirm_decision(return_id, disposition)
            except agents.InfeasibleChoice as exc:
                return _error(422, "infeasible_disposition", str(exc))
            except agents.NoSession as exc:
                return _error(404, "not_found", str(exc))
            session.state = "decided"
            session.decided = disposition
            state.persist()
        return plm.entry_to_dict(entry)

    @app.get("/reports/sustainability")
    def sustainability():
        report = reporting.sustainability_report(state.decision_log.entries)
        return reporting.report_to_dict(report)

    @app.get("/products")
    def list_products(limit: int | None = None):
        records = [domain.product_to_dict(p) for p in state.catalog.products.values()]
        if limit is not None:
            records = records[:limit]
        return {"products": records}

    @app.get("/products/{product_id}")
    def get_product(product_id: str):
        try:
            return domain.product_to_dict(state.catalog.get_product(product_id))
        except plm.NotFound:
            return _error(404, "not_found", f"product {product_id} not in catalog")

    @app.get("/cases")
    def list_cases(limit: int | None = None):
        cases = [cbr.case_to_dict(c) for c in state.case_base.cases]
        if limit is not None:
            cases = cases[:limit]
        return {"dedup_threshold": state.case_base.dedup_threshold, "cases": cases}

    return app


def main() -> None:
    import uvicorn

    config = load_service_config()
    state = ServiceState(config)
    uvicorn.run(create_app(state), host=config.host, port=config.port)


if __name__ == "__main__":
    main()
