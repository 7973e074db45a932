"""Flattening tables into marked-up strings for model input.

The default grammar renders properties first (``[P] key: value``), then each
row opened by ``[R]`` with anchors as ``[C] value`` (``[H]`` for headings).
Covered positions are skipped, so a merged anchor is rendered exactly once.
Custom linearizers can be registered by id and selected when building
training pairs or prompting a model.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from typing import Callable, Sequence

from .adapters import Dataset
from .errors import ConflictError, EmptySelectionError, NotFoundError
from .table import AnchorCell, Table, TableExample, highlighted_cells


@dataclass(frozen=True)
class LinearizationConfig:
    include_properties: bool = True
    highlighted_only: bool = False
    property_marker: str = "[P]"
    row_marker: str = "[R]"
    cell_marker: str = "[C]"
    heading_marker: str = "[H]"

    def __post_init__(self):
        markers = (self.property_marker, self.row_marker, self.cell_marker, self.heading_marker)
        if any(not m for m in markers):
            raise ValueError("markers must be non-empty")
        if len(set(markers)) != len(markers):
            raise ValueError("markers must be pairwise distinct")


DEFAULT_CONFIG = LinearizationConfig()
HIGHLIGHTED_CONFIG = LinearizationConfig(highlighted_only=True)


def linearize(table: Table, config: LinearizationConfig = DEFAULT_CONFIG) -> str:
    """Deterministically flatten a table; pure in both arguments."""
    if config.highlighted_only and not highlighted_cells(table):
        raise EmptySelectionError(
            "highlighted-only linearization needs at least one highlighted cell"
        )
    parts: list[str] = []
    if config.include_properties:
        for key, value in table.properties:
            parts.append(f"{config.property_marker} {key}: {value}")
    for row in table.grid:
        rendered: list[str] = []
        for cell in row:
            if not isinstance(cell, AnchorCell):
                continue
            if config.highlighted_only and not cell.is_highlighted:
                continue
            marker = config.heading_marker if cell.is_heading else config.cell_marker
            rendered.append(f"{marker} {cell.value}")
        if config.highlighted_only and not rendered:
            continue
        parts.append(config.row_marker)
        parts.extend(rendered)
    return " ".join(parts)


Linearizer = Callable[[Table], str]


class LinearizerRegistry:
    """Append-only id -> linearizer registry."""

    def __init__(self):
        self._lock = threading.Lock()
        self._fns: dict[str, Linearizer] = {}

    def register(self, linearizer_id: str, fn: Linearizer) -> str:
        with self._lock:
            if linearizer_id in self._fns:
                raise ConflictError(f"linearizer id {linearizer_id!r} is already registered")
            self._fns[linearizer_id] = fn
        return linearizer_id

    def get(self, linearizer_id: str) -> Linearizer:
        try:
            return self._fns[linearizer_id]
        except KeyError:
            raise NotFoundError(
                f"unknown linearizer {linearizer_id!r}; known: {sorted(self._fns)}"
            ) from None

    def ids(self) -> list[str]:
        return sorted(self._fns)


def _fresh_registry() -> LinearizerRegistry:
    registry = LinearizerRegistry()
    registry.register("default", lambda table: linearize(table, DEFAULT_CONFIG))
    registry.register("highlighted", lambda table: linearize(table, HIGHLIGHTED_CONFIG))
    return registry


DEFAULT_LINEARIZERS = _fresh_registry()


def register_linearizer(
    linearizer_id: str, fn: Linearizer, registry: LinearizerRegistry | None = None
) -> str:
    return (registry or DEFAULT_LINEARIZERS).register(linearizer_id, fn)


def make_training_pairs(
    dataset: Dataset,
    split: str,
    linearizer_id: str = "default",
    task_prefix: str | None = None,
    registry: LinearizerRegistry | None = None,
) -> list[tuple[str, tuple[str, ...]]]:
    """(input_text, references) pairs for a split, order preserved."""
    fn = (registry or DEFAULT_LINEARIZERS).get(linearizer_id)
    examples = dataset.split(split)
    pairs = []
    for example in examples:
        text = fn(example.table)
        if task_prefix:
            text = f"{task_prefix} {text}"
        pairs.append((text, example.references))
    return pairs


def pairs_to_jsonl(pairs: Sequence[tuple[str, Sequence[str]]]) -> str:
    """Serialize training pairs as JSONL lines ``{"in": ..., "refs": [...]}``."""
    return "".join(
        json.dumps({"in": text, "refs": list(refs)}, ensure_ascii=False) + "\n"
        for text, refs in pairs
    )


def example_input_text(
    example: TableExample,
    linearizer_id: str = "default",
    registry: LinearizerRegistry | None = None,
) -> str:
    return (registry or DEFAULT_LINEARIZERS).get(linearizer_id)(example.table)
