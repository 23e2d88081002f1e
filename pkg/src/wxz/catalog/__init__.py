"""The classified solution catalog: families, sets and solution lists."""

from __future__ import annotations

from typing import Mapping

from ..tensor import SquareMatrix
from .model import MatrixFamily, SlotSpec, SolutionEntry
from .sampling import Realization, Sampler, realize, sample_params
from .store import CATALOG_ENV, Catalog, load_catalog, normalize_scope


def instantiate(family: MatrixFamily | str, assignment: Mapping = (), catalog: Catalog | None = None) -> SquareMatrix:
    if isinstance(family, str):
        family = (catalog or load_catalog()).family(family)
    return family.instantiate(assignment)


def enumerate_solution_entries(scope: str, expand: bool = False, catalog: Catalog | None = None) -> list:
    """Entries of a list in catalog order; ``expand`` splits set-valued slots per member."""
    return (catalog or load_catalog()).entries(scope, expand=expand)


def realize_entry(entry: SolutionEntry | str, assignment: Mapping, catalog: Catalog | None = None,
                  members: Mapping | None = None, backend: str = "exact-preferred") -> Realization:
    """Build the concrete matrices of an entry.

    Set-valued slots must be pinned with ``members`` (slot -> family name or
    label) unless the entry was expanded already.
    """
    catalog = catalog or load_catalog()
    if isinstance(entry, str):
        entry = catalog.entry(entry)
    if not entry.is_expanded:
        options = catalog.expand(entry, dict(members or {}))
        if len(options) != 1:
            from ..errors import PreconditionViolated

            raise PreconditionViolated("entry has set-valued slots", f"{len(options)} member combinations match")
        entry = options[0]
    return realize(catalog, entry, assignment, backend=backend)


__all__ = [
    "CATALOG_ENV", "Catalog", "MatrixFamily", "Realization", "Sampler", "SlotSpec", "SolutionEntry",
    "enumerate_solution_entries", "instantiate", "load_catalog", "normalize_scope", "realize_entry",
    "sample_params",
]
