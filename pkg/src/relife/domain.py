"""Core vocabulary for the returns platform.

Products, materials, returned items, lifecycle stages and dispositions,
plus the sustainability indices (mass, recyclability, hazard, recycled
content) every scoring component is built on. Everything here is a pure
value type or a pure function; nothing touches storage or messaging.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from math import fsum
from typing import Iterator, Mapping


class DomainError(Exception):
    """Base class for domain-level failures."""


class ValidationFailed(DomainError):
    """A value violates one of its declared invariants."""


class ZeroMass(DomainError):
    """A mass-normalized index was requested for a product with no mass."""


class IllegalTransition(DomainError):
    """Lifecycle stage change along an edge that does not exist."""

    def __init__(self, from_stage: "LifecycleStage", to_stage: "LifecycleStage"):
        self.from_stage = from_stage
        self.to_stage = to_stage
        super().__init__(f"no lifecycle edge {from_stage.value} -> {to_stage.value}")


class MaterialCategory(str, Enum):
    METAL = "metal"
    PLASTIC = "plastic"
    ELECTRONIC = "electronic"
    GLASS = "glass"
    PAPER = "paper"
    COMPOSITE = "composite"
    OTHER = "other"


class HazardClass(str, Enum):
    NONE = "none"
    LOW = "low"
    HIGH = "high"


class ProductCategory(str, Enum):
    APPLIANCE = "appliance"
    ELECTRONICS = "electronics"
    FURNITURE = "furniture"
    PACKAGING = "packaging"
    OTHER = "other"


class LifecycleStage(str, Enum):
    DESIGN = "design"
    PRODUCTION = "production"
    DISTRIBUTION = "distribution"
    USE = "use"
    RETURNED = "returned"
    RECOVERY = "recovery"
    DISPOSAL = "disposal"


class ReturnReason(str, Enum):
    DEFECTIVE = "defective"
    END_OF_LIFE = "end_of_life"
    END_OF_USE = "end_of_use"
    CUSTOMER_DISSATISFACTION = "customer_dissatisfaction"
    USAGE_CONFUSION = "usage_confusion"
    RECALL = "recall"


class Disposition(str, Enum):
    REUSE = "reuse"
    REPAIR = "repair"
    RESALE = "resale"
    RECYCLE = "recycle"
    REDESIGN = "redesign"
    DISPOSE = "dispose"


# Preference order used for default scores and deterministic tie-breaks:
# prevention/reuse above recycling above disposal.
WASTE_HIERARCHY: tuple[Disposition, ...] = (
    Disposition.REUSE,
    Disposition.RESALE,
    Disposition.REPAIR,
    Disposition.REDESIGN,
    Disposition.RECYCLE,
    Disposition.DISPOSE,
)

_HIERARCHY_RANK = {d: i for i, d in enumerate(WASTE_HIERARCHY)}


def hierarchy_rank(d: Disposition) -> int:
    """Position of a disposition in the waste hierarchy (0 = most preferred)."""
    return _HIERARCHY_RANK[d]


# Forward flow design -> use, reverse flow use -> returned -> recovery/disposal,
# recovered parts re-enter manufacture.
STAGE_GRAPH: dict[LifecycleStage, frozenset[LifecycleStage]] = {
    LifecycleStage.DESIGN: frozenset({LifecycleStage.PRODUCTION}),
    LifecycleStage.PRODUCTION: frozenset({LifecycleStage.DISTRIBUTION}),
    LifecycleStage.DISTRIBUTION: frozenset({LifecycleStage.USE}),
    LifecycleStage.USE: frozenset({LifecycleStage.RETURNED}),
    LifecycleStage.RETURNED: frozenset({LifecycleStage.RECOVERY, LifecycleStage.DISPOSAL}),
    LifecycleStage.RECOVERY: frozenset({LifecycleStage.PRODUCTION}),
    LifecycleStage.DISPOSAL: frozenset(),
}

DEFAULT_HAZARD_WEIGHTS: dict[HazardClass, float] = {
    HazardClass.NONE: 0.0,
    HazardClass.LOW: 0.5,
    HazardClass.HIGH: 1.0,
}


@dataclass(frozen=True)
class MaterialSpec:
    """One concrete chunk of material used in a BOM, with its mass in grams."""

    material_id: str
    name: str
    category: MaterialCategory
    hazard_class: HazardClass
    recyclable: bool
    recycled_content_fraction: float
    mass_g: float


@dataclass(frozen=True)
class ComponentNode:
    """A node in the bill-of-materials tree."""

    component_id: str
    name: str
    materials: tuple[str, ...] = ()
    subcomponents: tuple["ComponentNode", ...] = ()
    disassembly_time_s: float = 0.0
    replaceable: bool = False


@dataclass(frozen=True)
class ProductRecord:
    """Product identity plus its BOM and lifecycle position."""

    product_id: str
    name: str
    version: str
    category: ProductCategory
    bom: ComponentNode
    lifecycle_stage: LifecycleStage = LifecycleStage.USE
    has_user_manual: bool = False
    manual_pages: int = 0


@dataclass(frozen=True)
class ReturnedItem:
    """A single return event; the query object of the whole pipeline.

    Grades are ordinal 0-4 (0 = destroyed, 4 = like-new).
    """

    return_id: str
    product_id: str
    reason: ReturnReason
    cosmetic_grade: int
    functional_grade: int
    completeness_grade: int
    age_months: int
    notes: str = ""


# ---------------------------------------------------------------------------
# validation


def validate_material(spec: MaterialSpec) -> None:
    if not spec.material_id:
        raise ValidationFailed("material_id must be nonempty")
    if not 0.0 <= spec.recycled_content_fraction <= 1.0:
        raise ValidationFailed(
            f"material {spec.material_id}: recycled_content_fraction "
            f"{spec.recycled_content_fraction} outside [0,1]"
        )
    if not spec.mass_g > 0:
        raise ValidationFailed(f"material {spec.material_id}: mass_g must be > 0")


def iter_components(node: ComponentNode) -> Iterator[ComponentNode]:
    """Depth-first walk of the component tree, root included."""
    yield node
    for sub in node.subcomponents:
        yield from iter_components(sub)


def iter_material_occurrences(node: ComponentNode) -> Iterator[str]:
    """Every material_id reference in the flattened tree, with repetition."""
    for comp in iter_components(node):
        yield from comp.materials


def validate_component_tree(root: ComponentNode, materials: Mapping[str, MaterialSpec]) -> None:
    seen: set[str] = set()
    for comp in iter_components(root):
        if comp.component_id in seen:
            raise ValidationFailed(f"component {comp.component_id} appears twice (tree required)")
        seen.add(comp.component_id)
        if comp.disassembly_time_s < 0:
            raise ValidationFailed(f"component {comp.component_id}: negative disassembly time")
        for mid in comp.materials:
            if mid not in materials:
                raise ValidationFailed(
                    f"component {comp.component_id} references unknown material {mid}"
                )


def validate_product(product: ProductRecord, materials: Mapping[str, MaterialSpec]) -> None:
    if not product.product_id:
        raise ValidationFailed("product_id must be nonempty")
    if product.manual_pages < 0:
        raise ValidationFailed(f"product {product.product_id}: manual_pages must be >= 0")
    validate_component_tree(product.bom, materials)
    if total_mass(product, materials) <= 0:
        raise ValidationFailed(f"product {product.product_id}: total mass must be > 0")


def validate_returned_item(item: ReturnedItem) -> None:
    if not item.return_id:
        raise ValidationFailed("return_id must be nonempty")
    for label, grade in (
        ("cosmetic_grade", item.cosmetic_grade),
        ("functional_grade", item.functional_grade),
        ("completeness_grade", item.completeness_grade),
    ):
        if not isinstance(grade, int) or not 0 <= grade <= 4:
            raise ValidationFailed(f"return {item.return_id}: {label} must be an integer in 0..4")
    if not isinstance(item.age_months, int) or item.age_months < 0:
        raise ValidationFailed(f"return {item.return_id}: age_months must be an integer >= 0")


# ---------------------------------------------------------------------------
# derived indices


def total_mass(product: ProductRecord, materials: Mapping[str, MaterialSpec]) -> float:
    """Sum of mass_g over every material occurrence in the flattened BOM.

    fsum keeps the result independent of sibling ordering, so the value is
    exactly invariant under BOM permutations.
    """
    try:
        return fsum(
            materials[mid].mass_g for mid in iter_material_occurrences(product.bom)
        )
    except KeyError as exc:
        raise ValidationFailed(f"unknown material {exc} in product {product.product_id}")


def recyclability_index(product: ProductRecord, materials: Mapping[str, MaterialSpec]) -> float:
    """Mass fraction of recyclable materials, in [0,1]."""
    total = total_mass(product, materials)
    if total <= 0:
        raise ZeroMass(f"product {product.product_id} has zero mass")
    recyclable = fsum(
        materials[mid].mass_g for mid in iter_material_occurrences(product.bom)
        if materials[mid].recyclable
    )
    return recyclable / total


def hazard_index(
    product: ProductRecord,
    materials: Mapping[str, MaterialSpec],
    weights: Mapping[HazardClass, float] = DEFAULT_HAZARD_WEIGHTS,
) -> float:
    """Mass-weighted hazard score, in [0,1] for weights within [0,1]."""
    total = total_mass(product, materials)
    if total <= 0:
        raise ZeroMass(f"product {product.product_id} has zero mass")
    weighted = fsum(
        materials[mid].mass_g * weights[materials[mid].hazard_class]
        for mid in iter_material_occurrences(product.bom)
    )
    return weighted / total


def recycled_content_fraction(
    product: ProductRecord, materials: Mapping[str, MaterialSpec]
) -> float:
    """Mass-weighted mean recycled content over the BOM, in [0,1]."""
    total = total_mass(product, materials)
    if total <= 0:
        raise ZeroMass(f"product {product.product_id} has zero mass")
    weighted = fsum(
        materials[mid].mass_g * materials[mid].recycled_content_fraction
        for mid in iter_material_occurrences(product.bom)
    )
    return weighted / total


def total_disassembly_time(product: ProductRecord) -> float:
    return sum(c.disassembly_time_s for c in iter_components(product.bom))


# ---------------------------------------------------------------------------
# lifecycle


def advance_stage(product: ProductRecord, to: LifecycleStage) -> ProductRecord:
    """Move the product along one edge of the stage graph."""
    if to not in STAGE_GRAPH[product.lifecycle_stage]:
        raise IllegalTransition(product.lifecycle_stage, to)
    return replace(product, lifecycle_stage=to)


def stage_path(start: LifecycleStage, target: LifecycleStage) -> list[LifecycleStage] | None:
    """Shortest path through the stage graph, endpoints included.

    Returns None when the target is unreachable; [start] when already there.
    """
    if start == target:
        return [start]
    frontier = [[start]]
    visited = {start}
    while frontier:
        next_frontier = []
        for path in frontier:
            for succ in sorted(STAGE_GRAPH[path[-1]], key=lambda s: s.value):
                if succ == target:
                    return path + [succ]
                if succ not in visited:
                    visited.add(succ)
                    next_frontier.append(path + [succ])
        frontier = next_frontier
    return None


# ---------------------------------------------------------------------------
# serialization (canonical snake_case field names)


def material_to_dict(spec: MaterialSpec) -> dict:
    return {
        "material_id": spec.material_id,
        "name": spec.name,
        "category": spec.category.value,
        "hazard_class": spec.hazard_class.value,
        "recyclable": spec.recyclable,
        "recycled_content_fraction": spec.recycled_content_fraction,
        "mass_g": spec.mass_g,
    }


def material_from_dict(data: dict) -> MaterialSpec:
    try:
        spec = MaterialSpec(
            material_id=str(data["material_id"]),
            name=str(data.get("name", "")),
            category=MaterialCategory(data["category"]),
            hazard_class=HazardClass(data["hazard_class"]),
            recyclable=bool(data["recyclable"]),
            recycled_content_fraction=float(data["recycled_content_fraction"]),
            mass_g=float(data["mass_g"]),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationFailed(f"bad material document: {exc}") from exc
    validate_material(spec)
    return spec


def component_to_dict(node: ComponentNode) -> dict:
    return {
        "component_id": node.component_id,
        "name": node.name,
        "materials": list(node.materials),
        "subcomponents": [component_to_dict(s) for s in node.subcomponents],
        "disassembly_time_s": node.disassembly_time_s,
        "replaceable": node.replaceable,
    }


def component_from_dict(data: dict) -> ComponentNode:
    try:
        return ComponentNode(
            component_id=str(data["component_id"]),
            name=str(data.get("name", "")),
            materials=tuple(str(m) for m in data.get("materials", [])),
            subcomponents=tuple(
                component_from_dict(s) for s in data.get("subcomponents", [])
            ),
            disassembly_time_s=float(data.get("disassembly_time_s", 0.0)),
            replaceable=bool(data.get("replaceable", False)),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationFailed(f"bad component document: {exc}") from exc


def product_to_dict(product: ProductRecord) -> dict:
    return {
        "product_id": product.product_id,
        "name": product.name,
        "version": product.version,
        "category": product.category.value,
        "bom": component_to_dict(product.bom),
        "lifecycle_stage": product.lifecycle_stage.value,
        "has_user_manual": product.has_user_manual,
        "manual_pages": product.manual_pages,
    }


def product_from_dict(data: dict) -> ProductRecord:
    try:
        return ProductRecord(
            product_id=str(data["product_id"]),
            name=str(data.get("name", "")),
            version=str(data.get("version", "")),
            category=ProductCategory(data["category"]),
            bom=component_from_dict(data["bom"]),
            lifecycle_stage=LifecycleStage(data.get("lifecycle_stage", "use")),
            has_user_manual=bool(data.get("has_user_manual", False)),
            manual_pages=int(data.get("manual_pages", 0)),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationFailed(f"bad product document: {exc}") from exc


def returned_item_to_dict(item: ReturnedItem) -> dict:
    return {
        "return_id": item.return_id,
        "product_id": item.product_id,
        "reason": item.reason.value,
        "cosmetic_grade": item.cosmetic_grade,
        "functional_grade": item.functional_grade,
        "completeness_grade": item.completeness_grade,
        "age_months": item.age_months,
        "notes": item.notes,
    }


def returned_item_from_dict(data: dict) -> ReturnedItem:
    try:
        item = ReturnedItem(
            return_id=str(data["return_id"]),
            product_id=str(data["product_id"]),
            reason=ReturnReason(data["reason"]),
            cosmetic_grade=int(data["cosmetic_grade"]),
            functional_grade=int(data["functional_grade"]),
            completeness_grade=int(data["completeness_grade"]),
            age_months=int(data["age_months"]),
            notes=str(data.get("notes", "")),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ValidationFailed(f"bad returned-item document: {exc}") from exc
    validate_returned_item(item)
    return item
