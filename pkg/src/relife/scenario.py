"""Synthetic fixture generation and batch replay.

The generator is seeded Mersenne Twister (Python's random module); the seed
is recorded in the returns-file header, so a (seed, flags) pair fully
determines every output byte. The run path drives the same InspectPipeline
the HTTP service uses, bypassing transport.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from . import cbr, domain, plm, reporting, rules
from .agents import InspectPipeline, PipelineConfig
from .jsonio import dump_document
from .timeutil import LogicalClock

GENERATOR_ALGORITHM = "mersenne-twister"

_NOUNS = (
    "kettle", "toaster", "lamp", "router", "drill", "blender", "monitor",
    "heater", "fan", "scale", "speaker", "charger",
)
_MATERIAL_NAMES = (
    "steel sheet", "aluminium frame", "abs shell", "pp housing", "pcb board",
    "copper coil", "glass panel", "cardboard liner", "rubber seal", "li cell",
)


def _material(rng: random.Random, idx: int) -> domain.MaterialSpec:
    hazard = rng.choices(
        [domain.HazardClass.NONE, domain.HazardClass.LOW, domain.HazardClass.HIGH],
        weights=[0.6, 0.25, 0.15],
    )[0]
    return domain.MaterialSpec(
        material_id=f"gm-{idx:04d}",
        name=rng.choice(_MATERIAL_NAMES),
        category=rng.choice(list(domain.MaterialCategory)),
        hazard_class=hazard,
        recyclable=rng.random() < 0.6,
        recycled_content_fraction=round(rng.random(), 3),
        mass_g=round(rng.uniform(5.0, 3000.0), 1),
    )


def _component(rng: random.Random, prefix: str, material_ids: list[str],
               depth: int, counter: list[int]) -> domain.ComponentNode:
    counter[0] += 1
    index = counter[0]
    subs = []
    if depth < 2:
        for _ in range(rng.randint(0, 2)):
            subs.append(_component(rng, prefix, material_ids, depth + 1, counter))
    n_materials = rng.randint(1, 2) if depth == 0 else rng.randint(0, 2)
    return domain.ComponentNode(
        component_id=f"{prefix}-c{index:03d}",
        name=f"part {index}",
        materials=tuple(rng.choice(material_ids) for _ in range(n_materials)),
        subcomponents=tuple(subs),
        disassembly_time_s=round(rng.uniform(0.0, 240.0), 1),
        replaceable=rng.random() < 0.5,
    )


def generate_catalog(rng: random.Random, n_products: int) -> plm.Catalog:
    catalog = plm.Catalog()
    n_materials = max(4, 2 * n_products)
    for i in range(n_materials):
        catalog.upsert_material(_material(rng, i))
    material_ids = sorted(catalog.materials)
    for i in range(n_products):
        product = domain.ProductRecord(
            product_id=f"gp-{i:04d}",
            name=f"{rng.choice(_NOUNS)} {i}",
            version=f"{rng.randint(1, 3)}.{rng.randint(0, 9)}",
            category=rng.choice(list(domain.ProductCategory)),
            bom=_component(rng, f"gp-{i:04d}", material_ids, 0, [0]),
            lifecycle_stage=domain.LifecycleStage.USE,
            has_user_manual=rng.random() < 0.6,
            manual_pages=rng.randint(0, 60),
        )
        catalog.upsert_product(product)
    return catalog


def generate_returns(rng: random.Random, n_returns: int,
                     product_ids: list[str]) -> list[domain.ReturnedItem]:
    return [
        domain.ReturnedItem(
            return_id=f"gr-{i:05d}",
            product_id=rng.choice(product_ids),
            reason=rng.choice(list(domain.ReturnReason)),
            cosmetic_grade=rng.randint(0, 4),
            functional_grade=rng.randint(0, 4),
            completeness_grade=rng.randint(0, 4),
            age_months=rng.randint(0, 180),
            notes="",
        )
        for i in range(n_returns)
    ]


def write_returns_file(path: str | Path, seed: int, items: list[domain.ReturnedItem]) -> None:
    document = {
        "generator": {"algorithm": GENERATOR_ALGORITHM, "seed": seed},
        "returns": [domain.returned_item_to_dict(i) for i in items],
    }
    Path(path).write_text(dump_document(document), encoding="utf-8")


def load_returns_file(path: str | Path) -> list[domain.ReturnedItem]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    records = data["returns"] if isinstance(data, dict) else data
    return [domain.returned_item_from_dict(r) for r in records]


def generate_fixtures(seed: int, n_products: int, n_returns: int, out_dir: str | Path) -> dict:
    """Deterministic catalog + return stream + empty case base + default rules."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    catalog = generate_catalog(rng, n_products)
    items = generate_returns(rng, n_returns, sorted(catalog.products))
    paths = {
        "catalog": out / "catalog.json",
        "returns": out / "returns.json",
        "cases": out / "cases.json",
        "ruleset": out / "ruleset.json",
    }
    plm.save_catalog(catalog, paths["catalog"])
    write_returns_file(paths["returns"], seed, items)
    cbr.save_case_base(cbr.CaseBase(), paths["cases"])
    rules.save_ruleset(rules.RuleSet(), paths["ruleset"])
    return paths


def run_stream(
    catalog_path: str | Path,
    returns_path: str | Path,
    ruleset_path: str | Path,
    cases_path: str | Path,
    report_path: str | Path,
    trace_path: str | Path,
    log_path: str | Path,
    auto_accept_top: bool = False,
    cases_out_path: str | Path | None = None,
    config: PipelineConfig | None = None,
) -> reporting.SustainabilityReport:
    """Evaluate every return in the stream; write report, trace and log.

    The decision log is an output of this run, so any stale file at
    log_path is replaced rather than appended to.
    """
    catalog = plm.load_catalog(catalog_path)
    items = load_returns_file(returns_path)
    ruleset = rules.load_ruleset(ruleset_path)
    case_base = cbr.load_case_base(cases_path)
    log_file = Path(log_path)
    if log_file.exists():
        log_file.unlink()
    pipeline = InspectPipeline(
        catalog=catalog,
        case_base=case_base,
        ruleset=ruleset,
        decision_log=plm.DecisionLog(log_file),
        config=config or PipelineConfig(),
        clock=LogicalClock(),
    )
    for item in items:
        recommendation = pipeline.inspect_evaluate(item)
        if auto_accept_top:
            pipeline.confirm_decision(item.return_id, recommendation.ranked[0].disposition)
    report = reporting.sustainability_report(pipeline.decision_log.entries)
    Path(report_path).write_text(
        dump_document(reporting.report_to_dict(report)), encoding="utf-8"
    )
    pipeline.system.export_trace(trace_path)
    if cases_out_path is not None:
        cbr.save_case_base(case_base, cases_out_path)
    return report
