import random

import pytest
from hypothesis import given, strategies as st

from relife import domain
from relife.domain import (
    ComponentNode,
    HazardClass,
    IllegalTransition,
    LifecycleStage,
    MaterialCategory,
    MaterialSpec,
    ProductCategory,
    ProductRecord,
    STAGE_GRAPH,
)

from .conftest import flat_product

# Frozen from the independent flatten-and-sum oracle run against
# fixtures/kettle.json before the implementation was wired up.
KETTLE_TOTAL_MASS = 1180.0
KETTLE_RECYCLABILITY = 0.7796610169491526
KETTLE_HAZARD = 0.11864406779661017
KETTLE_RECYCLED_CONTENT = 0.261864406779661


def oracle_flatten_mass(node_dict, materials_dict):
    """Brute-force tree walk over the raw JSON document."""
    mass = sum(materials_dict[m]["mass_g"] for m in node_dict.get("materials", []))
    for sub in node_dict.get("subcomponents", []):
        mass += oracle_flatten_mass(sub, materials_dict)
    return mass


def test_total_mass_single_component():
    product, materials = flat_product(masses_and_flags=[(1000.0, True, HazardClass.NONE)])
    assert domain.total_mass(product, materials) == 1000.0


def test_total_mass_two_components_additive():
    materials = {
        "a": MaterialSpec("a", "a", MaterialCategory.METAL, HazardClass.NONE, True, 0.0, 600.0),
        "b": MaterialSpec("b", "b", MaterialCategory.PLASTIC, HazardClass.NONE, True, 0.0, 400.0),
    }
    bom = ComponentNode(
        "root", "root", materials=("a",),
        subcomponents=(ComponentNode("sub", "sub", materials=("b",)),),
    )
    product = ProductRecord("p", "p", "1", ProductCategory.OTHER, bom)
    assert domain.total_mass(product, materials) == 1000.0


def test_total_mass_kettle_fixture(kettle_catalog):
    import json

    from .conftest import FIXTURES

    product = kettle_catalog.get_product("ktl-1")
    assert domain.total_mass(product, kettle_catalog.materials) == KETTLE_TOTAL_MASS
    # cross-check the frozen value against the oracle, straight off the document
    doc = json.loads((FIXTURES / "kettle.json").read_text())
    assert oracle_flatten_mass(doc["products"]["ktl-1"]["bom"], doc["materials"]) == KETTLE_TOTAL_MASS


def test_recyclability_index_boundaries():
    all_recyclable, materials = flat_product(
        masses_and_flags=[(300.0, True, HazardClass.NONE), (700.0, True, HazardClass.NONE)]
    )
    assert domain.recyclability_index(all_recyclable, materials) == 1.0

    none_recyclable, materials = flat_product(
        masses_and_flags=[(500.0, False, HazardClass.NONE)]
    )
    assert domain.recyclability_index(none_recyclable, materials) == 0.0


def test_recyclability_index_mixed():
    product, materials = flat_product(
        masses_and_flags=[(600.0, True, HazardClass.NONE), (400.0, False, HazardClass.NONE)]
    )
    assert domain.recyclability_index(product, materials) == pytest.approx(0.6)


def test_hazard_index_boundaries():
    inert, materials = flat_product(masses_and_flags=[(900.0, True, HazardClass.NONE)])
    assert domain.hazard_index(inert, materials) == 0.0

    nasty, materials = flat_product(
        masses_and_flags=[(400.0, False, HazardClass.HIGH), (600.0, False, HazardClass.HIGH)]
    )
    assert domain.hazard_index(nasty, materials) == 1.0


def test_hazard_index_mixed():
    product, materials = flat_product(
        masses_and_flags=[(200.0, False, HazardClass.HIGH), (800.0, True, HazardClass.NONE)]
    )
    assert domain.hazard_index(product, materials) == pytest.approx(0.2)


def test_kettle_indices_match_oracle(kettle_catalog):
    product = kettle_catalog.get_product("ktl-1")
    materials = kettle_catalog.materials
    assert domain.recyclability_index(product, materials) == KETTLE_RECYCLABILITY
    assert domain.hazard_index(product, materials) == KETTLE_HAZARD
    assert domain.recycled_content_fraction(product, materials) == KETTLE_RECYCLED_CONTENT


def test_advance_stage_reverse_flow():
    product, _ = flat_product()
    returned = domain.advance_stage(product, LifecycleStage.RETURNED)
    assert returned.lifecycle_stage is LifecycleStage.RETURNED
    recovered = domain.advance_stage(returned, LifecycleStage.RECOVERY)
    assert recovered.lifecycle_stage is LifecycleStage.RECOVERY
    # only the stage moved
    assert recovered.bom == product.bom
    assert recovered.product_id == product.product_id


def test_advance_stage_rejects_missing_edge():
    product, _ = flat_product()
    at_design = product.__class__(**{**product.__dict__, "lifecycle_stage": LifecycleStage.DESIGN})
    with pytest.raises(IllegalTransition) as err:
        domain.advance_stage(at_design, LifecycleStage.USE)
    assert err.value.from_stage is LifecycleStage.DESIGN
    assert err.value.to_stage is LifecycleStage.USE


def test_stage_graph_edges_exhaustive():
    product, _ = flat_product()
    for start, targets in STAGE_GRAPH.items():
        based = domain.ProductRecord(
            product.product_id, product.name, product.version, product.category,
            product.bom, lifecycle_stage=start,
        )
        for to in LifecycleStage:
            if to in targets:
                assert domain.advance_stage(based, to).lifecycle_stage is to
            else:
                with pytest.raises(IllegalTransition):
                    domain.advance_stage(based, to)


@st.composite
def product_with_materials(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    materials = {}
    for i in range(n):
        materials[f"m{i}"] = MaterialSpec(
            material_id=f"m{i}",
            name=f"m{i}",
            category=draw(st.sampled_from(list(MaterialCategory))),
            hazard_class=draw(st.sampled_from(list(HazardClass))),
            recyclable=draw(st.booleans()),
            recycled_content_fraction=draw(
                st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
            ),
            mass_g=draw(st.floats(min_value=0.001, max_value=10_000.0, allow_nan=False)),
        )
    ids = sorted(materials)
    root = ComponentNode(
        "root", "root",
        materials=tuple(draw(st.lists(st.sampled_from(ids), min_size=1, max_size=4))),
        subcomponents=tuple(
            ComponentNode(f"s{j}", f"s{j}", materials=tuple(draw(
                st.lists(st.sampled_from(ids), max_size=3))))
            for j in range(draw(st.integers(min_value=0, max_value=3)))
        ),
    )
    product = ProductRecord("p", "p", "1", ProductCategory.OTHER, root)
    return product, materials


@given(product_with_materials())
def test_indices_bounded(pm):
    product, materials = pm
    assert 0.0 <= domain.recyclability_index(product, materials) <= 1.0
    assert 0.0 <= domain.hazard_index(product, materials) <= 1.0


@given(product_with_materials())
def test_recyclable_and_nonrecyclable_fractions_sum_to_one(pm):
    product, materials = pm
    total = domain.total_mass(product, materials)
    non_recyclable = sum(
        materials[m].mass_g
        for m in domain.iter_material_occurrences(product.bom)
        if not materials[m].recyclable
    )
    assert abs(domain.recyclability_index(product, materials) + non_recyclable / total - 1.0) < 1e-9


@given(product_with_materials(), st.randoms())
def test_total_mass_invariant_under_sibling_permutation(pm, rng):
    product, materials = pm
    subs = list(product.bom.subcomponents)
    rng.shuffle(subs)
    permuted = ProductRecord(
        product.product_id, product.name, product.version, product.category,
        ComponentNode(
            product.bom.component_id, product.bom.name,
            materials=product.bom.materials, subcomponents=tuple(subs),
        ),
    )
    assert domain.total_mass(permuted, materials) == domain.total_mass(product, materials)


def test_stage_path_walks_never_throw():
    rng = random.Random(11)
    for _ in range(200):
        stage = rng.choice(list(LifecycleStage))
        product, _ = flat_product()
        current = ProductRecord(
            product.product_id, product.name, product.version, product.category,
            product.bom, lifecycle_stage=stage,
        )
        for _ in range(5):
            nexts = sorted(STAGE_GRAPH[current.lifecycle_stage], key=lambda s: s.value)
            if not nexts:
                break
            current = domain.advance_stage(current, rng.choice(nexts))


def test_validation_rejects_bad_values():
    with pytest.raises(domain.ValidationFailed):
        domain.material_from_dict(
            {"material_id": "x", "category": "metal", "hazard_class": "none",
             "recyclable": True, "recycled_content_fraction": 1.5, "mass_g": 10.0}
        )
    with pytest.raises(domain.ValidationFailed):
        domain.material_from_dict(
            {"material_id": "x", "category": "metal", "hazard_class": "none",
             "recyclable": True, "recycled_content_fraction": 0.5, "mass_g": 0.0}
        )
    with pytest.raises(domain.ValidationFailed):
        domain.returned_item_from_dict(
            {"return_id": "r", "product_id": "p", "reason": "defective",
             "cosmetic_grade": 5, "functional_grade": 0, "completeness_grade": 0,
             "age_months": 0}
        )


def test_zero_mass_bypass_raises():
    empty = ProductRecord(
        "p-empty", "empty", "1", ProductCategory.OTHER,
        ComponentNode("root-e", "root"),
    )
    with pytest.raises(domain.ZeroMass):
        domain.recyclability_index(empty, {})
    with pytest.raises(domain.ZeroMass):
        domain.hazard_index(empty, {})


def test_duplicate_component_id_rejected():
    product, materials = flat_product()
    shared = ComponentNode("dup", "dup")
    bad = ProductRecord(
        "p2", "p2", "1", ProductCategory.OTHER,
        ComponentNode("root", "root", materials=tuple(materials),
                      subcomponents=(shared, shared)),
    )
    with pytest.raises(domain.ValidationFailed):
        domain.validate_product(bad, materials)
