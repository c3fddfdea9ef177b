"""File-backed product-lifecycle repository.

The catalog is a plain JSON document (top-level keys: revision, materials,
products) and the decision log is append-only JSON-lines. Plain text keeps
fixtures diff-able and needs no external services. Mutations are serialized
through the owning object; readers get immutable snapshots.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from . import domain
from .jsonio import dump_document, dump_line


class PlmError(Exception):
    """Base class for store failures."""


class NotFound(PlmError):
    pass


class UnknownMaterial(PlmError):
    pass


class SequenceGap(PlmError):
    pass


class StorageFailure(PlmError):
    pass


class IoError(PlmError):
    pass


class ParseError(PlmError):
    """Document did not parse or failed structural validation.

    line/column are set when the underlying JSON decoder reported a position.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class Catalog:
    """Product and material store with a monotone revision counter.

    The revision counts successful mutations since creation; materials
    seeded at construction are part of creation, not mutations. Loading a
    persisted catalog restores whatever revision it was saved with.
    """

    def __init__(self, materials: dict[str, domain.MaterialSpec] | None = None):
        self.products: dict[str, domain.ProductRecord] = {}
        self.materials: dict[str, domain.MaterialSpec] = dict(materials or {})
        for spec in self.materials.values():
            domain.validate_material(spec)
        self.revision: int = 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Catalog):
            return NotImplemented
        return (
            self.revision == other.revision
            and self.materials == other.materials
            and self.products == other.products
        )

    def upsert_material(self, spec: domain.MaterialSpec) -> None:
        domain.validate_material(spec)
        self.materials[spec.material_id] = spec
        self.revision += 1

    def upsert_product(self, record: domain.ProductRecord) -> None:
        for mid in domain.iter_material_occurrences(record.bom):
            if mid not in self.materials:
                raise UnknownMaterial(
                    f"product {record.product_id} references unknown material {mid}"
                )
        domain.validate_product(record, self.materials)
        self.products[record.product_id] = record
        self.revision += 1

    def get_product(self, product_id: str) -> domain.ProductRecord:
        try:
            return self.products[product_id]
        except KeyError:
            raise NotFound(f"product {product_id} not in catalog")

    def get_material(self, material_id: str) -> domain.MaterialSpec:
        try:
            return self.materials[material_id]
        except KeyError:
            raise NotFound(f"material {material_id} not in catalog")


def catalog_to_dict(catalog: Catalog) -> dict:
    return {
        "revision": catalog.revision,
        "materials": {
            mid: domain.material_to_dict(spec) for mid, spec in catalog.materials.items()
        },
        "products": {
            pid: domain.product_to_dict(rec) for pid, rec in catalog.products.items()
        },
    }


def catalog_from_dict(data: dict) -> Catalog:
    if not isinstance(data, dict):
        raise ParseError("catalog document must be a JSON object")
    catalog = Catalog()
    try:
        materials = data.get("materials", {})
        products = data.get("products", {})
        for mid, spec_data in materials.items():
            spec = domain.material_from_dict(spec_data)
            if spec.material_id != mid:
                raise ParseError(f"material key {mid} disagrees with material_id")
            catalog.materials[mid] = spec
        for pid, rec_data in products.items():
            record = domain.product_from_dict(rec_data)
            if record.product_id != pid:
                raise ParseError(f"product key {pid} disagrees with product_id")
            domain.validate_product(record, catalog.materials)
            catalog.products[pid] = record
        catalog.revision = int(data.get("revision", 0))
    except domain.ValidationFailed as exc:
        raise ParseError(str(exc)) from exc
    except (AttributeError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed catalog document: {exc}") from exc
    return catalog


def save_catalog(catalog: Catalog, path: str | Path) -> None:
    try:
        Path(path).write_text(dump_document(catalog_to_dict(catalog)), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write catalog to {path}: {exc}") from exc


def load_catalog(path: str | Path) -> Catalog:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read catalog from {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return catalog_from_dict(data)


# ---------------------------------------------------------------------------
# decision log


@dataclass(frozen=True)
class DecisionLogEntry:
    """One confirmed disposition.

    landfill_mass_g records the mass routed to landfill by this decision
    (zero unless the chosen disposition was dispose) so that sustainability
    reports stay a pure fold over the log file.
    """

    sequence: int
    timestamp: str
    return_id: str
    product_id: str
    chosen: domain.Disposition
    recommendation_rank_of_chosen: int
    env_score_of_chosen: float
    landfill_mass_g: float = 0.0


def entry_to_dict(entry: DecisionLogEntry) -> dict:
    return {
        "sequence": entry.sequence,
        "timestamp": entry.timestamp,
        "return_id": entry.return_id,
        "product_id": entry.product_id,
        "chosen": entry.chosen.value,
        "recommendation_rank_of_chosen": entry.recommendation_rank_of_chosen,
        "env_score_of_chosen": entry.env_score_of_chosen,
        "landfill_mass_g": entry.landfill_mass_g,
    }


def entry_from_dict(data: dict) -> DecisionLogEntry:
    try:
        return DecisionLogEntry(
            sequence=int(data["sequence"]),
            timestamp=str(data["timestamp"]),
            return_id=str(data["return_id"]),
            product_id=str(data["product_id"]),
            chosen=domain.Disposition(data["chosen"]),
            recommendation_rank_of_chosen=int(data["recommendation_rank_of_chosen"]),
            env_score_of_chosen=float(data["env_score_of_chosen"]),
            landfill_mass_g=float(data.get("landfill_mass_g", 0.0)),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"malformed decision-log entry: {exc}") from exc


class DecisionLog:
    """Append-only JSON-lines log; entries are never mutated or deleted."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.entries: list[DecisionLogEntry] = []
        if self.path.exists():
            self.entries = read_log_entries(self.path)

    @property
    def next_sequence(self) -> int:
        return self.entries[-1].sequence + 1 if self.entries else 1

    def append(self, entry: DecisionLogEntry) -> None:
        if entry.sequence != self.next_sequence:
            raise SequenceGap(
                f"expected sequence {self.next_sequence}, got {entry.sequence}"
            )
        line = dump_line(entry_to_dict(entry)) + "\n"
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(line)
                handle.flush()
                os.fsync(handle.fileno())
        except OSError as exc:
            raise StorageFailure(f"cannot append to decision log {self.path}: {exc}") from exc
        self.entries.append(entry)


def read_log_entries(path: str | Path) -> list[DecisionLogEntry]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read decision log from {path}: {exc}") from exc
    entries: list[DecisionLogEntry] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            raise ParseError("blank line in decision log", line=lineno, column=1)
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=lineno, column=exc.colno) from exc
        entry = entry_from_dict(data)
        expected = entries[-1].sequence + 1 if entries else 1
        if entry.sequence != expected:
            raise SequenceGap(f"log line {lineno}: expected sequence {expected}, got {entry.sequence}")
        entries.append(entry)
    return entries
