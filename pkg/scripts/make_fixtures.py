"""Regenerate the checked-in fixture catalogs.

fixtures/kettle.json   - one appliance with a 3-level BOM
fixtures/catalog_small.json - 3 products / 7 materials, incl. a fully
hazardous battery pack used by the what-if tests.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from relife import plm
from relife.domain import (
    ComponentNode,
    HazardClass,
    LifecycleStage,
    MaterialCategory,
    MaterialSpec,
    ProductCategory,
    ProductRecord,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def kettle_materials() -> list[MaterialSpec]:
    return [
        MaterialSpec("m-steel", "stainless body steel", MaterialCategory.METAL,
                     HazardClass.NONE, True, 0.3, 800.0),
        MaterialSpec("m-heater", "nichrome heating element", MaterialCategory.ELECTRONIC,
                     HazardClass.LOW, False, 0.0, 150.0),
        MaterialSpec("m-therm", "thermostat module", MaterialCategory.ELECTRONIC,
                     HazardClass.HIGH, False, 0.0, 20.0),
        MaterialSpec("m-plastic", "polypropylene housing", MaterialCategory.PLASTIC,
                     HazardClass.NONE, True, 0.5, 120.0),
        MaterialSpec("m-cord", "power cord", MaterialCategory.ELECTRONIC,
                     HazardClass.LOW, False, 0.1, 90.0),
    ]


def kettle_product() -> ProductRecord:
    bom = ComponentNode(
        component_id="kettle-body",
        name="kettle body",
        materials=("m-steel",),
        disassembly_time_s=30.0,
        subcomponents=(
            ComponentNode(
                component_id="heating-assembly",
                name="heating assembly",
                materials=("m-heater",),
                disassembly_time_s=60.0,
                replaceable=True,
                subcomponents=(
                    ComponentNode(
                        component_id="thermostat",
                        name="thermostat",
                        materials=("m-therm",),
                        disassembly_time_s=45.0,
                        replaceable=True,
                    ),
                ),
            ),
            ComponentNode(
                component_id="handle",
                name="handle",
                materials=("m-plastic",),
                disassembly_time_s=10.0,
                replaceable=True,
            ),
            ComponentNode(
                component_id="cord",
                name="power cord",
                materials=("m-cord",),
                disassembly_time_s=5.0,
                replaceable=True,
            ),
        ),
    )
    return ProductRecord(
        product_id="ktl-1",
        name="electric kettle",
        version="1.0",
        category=ProductCategory.APPLIANCE,
        bom=bom,
        lifecycle_stage=LifecycleStage.USE,
        has_user_manual=True,
        manual_pages=12,
    )


def battery_product_and_materials() -> tuple[ProductRecord, list[MaterialSpec]]:
    materials = [
        MaterialSpec("m-lead", "lead plates", MaterialCategory.METAL,
                     HazardClass.HIGH, True, 0.8, 500.0),
        MaterialSpec("m-acid", "electrolyte", MaterialCategory.OTHER,
                     HazardClass.HIGH, False, 0.0, 100.0),
    ]
    bom = ComponentNode(
        component_id="pack-shell",
        name="pack shell",
        materials=("m-lead",),
        disassembly_time_s=90.0,
        subcomponents=(
            ComponentNode(
                component_id="cell-block",
                name="cell block",
                materials=("m-acid",),
                disassembly_time_s=120.0,
            ),
        ),
    )
    product = ProductRecord(
        product_id="bat-1",
        name="battery pack",
        version="2.1",
        category=ProductCategory.ELECTRONICS,
        bom=bom,
        lifecycle_stage=LifecycleStage.USE,
    )
    return product, materials


def lamp_product() -> ProductRecord:
    bom = ComponentNode(
        component_id="lamp-frame",
        name="lamp frame",
        materials=("m-plastic",),
        disassembly_time_s=15.0,
        subcomponents=(
            ComponentNode(
                component_id="cord-assembly",
                name="cord assembly",
                materials=("m-cord",),
                disassembly_time_s=20.0,
                replaceable=True,
            ),
        ),
    )
    return ProductRecord(
        product_id="lmp-1",
        name="desk lamp",
        version="1.2",
        category=ProductCategory.FURNITURE,
        bom=bom,
        lifecycle_stage=LifecycleStage.USE,
    )


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)

    kettle_only = plm.Catalog()
    for spec in kettle_materials():
        kettle_only.upsert_material(spec)
    kettle_only.upsert_product(kettle_product())
    plm.save_catalog(kettle_only, FIXTURES / "kettle.json")

    small = plm.Catalog()
    battery, battery_materials = battery_product_and_materials()
    for spec in kettle_materials() + battery_materials:
        small.upsert_material(spec)
    small.upsert_product(kettle_product())
    small.upsert_product(battery)
    small.upsert_product(lamp_product())
    plm.save_catalog(small, FIXTURES / "catalog_small.json")
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
