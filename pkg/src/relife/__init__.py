"""Multi-agent decision platform for end-of-life product returns.

An Inspect agent classifies each return into a disposition (reuse, repair,
resale, recycle, redesign, dispose) with case-based reasoning and
environmental rule scoring, consulting Recover, Redesign and Disposal
specialist agents over an ACL-style message protocol, backed by a
file-based product catalog and a learning case base.
"""

__version__ = "0.1.0"

from .domain import (  # noqa: F401
    ComponentNode,
    Disposition,
    HazardClass,
    LifecycleStage,
    MaterialCategory,
    MaterialSpec,
    ProductCategory,
    ProductRecord,
    ReturnReason,
    ReturnedItem,
    WASTE_HIERARCHY,
)
