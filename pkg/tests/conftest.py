from pathlib import Path

import pytest

from relife import plm
from relife.domain import (
    ComponentNode,
    HazardClass,
    MaterialCategory,
    MaterialSpec,
    ProductCategory,
    ProductRecord,
    ReturnReason,
    ReturnedItem,
)

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
CONFIG = ROOT / "config"


@pytest.fixture
def kettle_catalog() -> plm.Catalog:
    return plm.load_catalog(FIXTURES / "kettle.json")


@pytest.fixture
def small_catalog() -> plm.Catalog:
    return plm.load_catalog(FIXTURES / "catalog_small.json")


def flat_product(
    product_id: str = "p-1",
    masses_and_flags: list[tuple[float, bool, HazardClass]] | None = None,
    category: ProductCategory = ProductCategory.APPLIANCE,
    replaceable: bool = True,
) -> tuple[ProductRecord, dict[str, MaterialSpec]]:
    """One-component product over ad-hoc materials: (mass, recyclable, hazard) triples."""
    if masses_and_flags is None:
        masses_and_flags = [(1000.0, True, HazardClass.NONE)]
    materials = {}
    ids = []
    for i, (mass, recyclable, hazard) in enumerate(masses_and_flags):
        mid = f"{product_id}-m{i}"
        materials[mid] = MaterialSpec(
            material_id=mid,
            name=f"material {i}",
            category=MaterialCategory.METAL,
            hazard_class=hazard,
            recyclable=recyclable,
            recycled_content_fraction=0.0,
            mass_g=mass,
        )
        ids.append(mid)
    product = ProductRecord(
        product_id=product_id,
        name="test product",
        version="1",
        category=category,
        bom=ComponentNode(
            component_id=f"{product_id}-root",
            name="root",
            materials=tuple(ids),
            replaceable=replaceable,
        ),
    )
    return product, materials


def make_return(
    return_id: str = "r-1",
    product_id: str = "p-1",
    reason: ReturnReason = ReturnReason.DEFECTIVE,
    grades: tuple[int, int, int] = (4, 4, 4),
    age_months: int = 0,
) -> ReturnedItem:
    cosmetic, functional, completeness = grades
    return ReturnedItem(
        return_id=return_id,
        product_id=product_id,
        reason=reason,
        cosmetic_grade=cosmetic,
        functional_grade=functional,
        completeness_grade=completeness,
        age_months=age_months,
    )
