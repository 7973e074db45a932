"""Format adapters and dataset loading.

Source records (triple graphs, key-value pairs, tables with highlights) are
converted into the canonical table model. Datasets live on disk as one
directory per dataset id::

    datasets/{id}/info.json       # DatasetInfo fields
    datasets/{id}/{split}.jsonl   # one example per line

Each JSONL line is an object
``{"type": ..., "payload": ..., "properties": [[k, v], ...], "references": [...]}``
where ``type`` is one of ``key_value``, ``graph``, ``table``,
``table_highlighted``. Graph payloads carry ``{"triples": [[s, p, o], ...]}``,
key-value payloads ``{"pairs": [[k, v], ...]}``, and table payloads the
canonical table serialization plus an optional ``"highlights": [[r, c], ...]``
list.

Custom sources plug in through :class:`LoaderRegistry`: registering a
loader takes one mapping function from a raw source record to a
:class:`TableExample`.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .errors import (
    BoundsError,
    ConflictError,
    EmptyInputError,
    IngestionError,
    NotFoundError,
    ParseError,
)
from .table import (
    AnchorCell,
    Coord,
    CoveredCell,
    Table,
    TableExample,
    cell_at,
    highlighted_cells,
    table_from_payload,
    table_to_payload,
    toggle_highlight,
    validate,
)

DATA_TYPES = ("key_value", "graph", "table", "table_highlighted")

_ID_RE = re.compile(r"^[a-z0-9_\-]+$")

TRIPLE_HEADER = ("subject", "predicate", "object")


@dataclass(frozen=True)
class DatasetInfo:
    id: str
    name: str = ""
    description: str = ""
    homepage: str = ""
    license: str = ""
    version: str = ""
    data_type: str = "table"
    split_sizes: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not _ID_RE.match(self.id):
            raise ValueError(f"dataset id {self.id!r} must match [a-z0-9_-]+")
        if self.data_type not in DATA_TYPES:
            raise ValueError(f"data_type {self.data_type!r} not one of {DATA_TYPES}")
        if any(n < 0 for n in self.split_sizes.values()):
            raise ValueError("split sizes must be >= 0")


@dataclass(frozen=True)
class Dataset:
    info: DatasetInfo
    splits: Mapping[str, tuple[TableExample, ...]]

    def split(self, name: str) -> tuple[TableExample, ...]:
        if name not in self.splits:
            raise NotFoundError(
                f"dataset {self.info.id!r} has no loaded split {name!r}; "
                f"available: {sorted(self.splits)}"
            )
        return self.splits[name]


@dataclass(frozen=True)
class LoaderSpec:
    id: str
    data_type: str
    source_path: Path
    options: Mapping[str, str] = field(default_factory=dict)


RowMapper = Callable[[dict], TableExample]


# --- adapters ----------------------------------------------------------------


def triples_to_table(
    triples: Sequence[tuple[str, str, str]],
    properties: Sequence[tuple[str, str]] = (),
) -> Table:
    """One row per (subject, predicate, object) triple under a heading row."""
    if not triples:
        raise EmptyInputError("cannot build a table from an empty triple list")
    header = tuple(AnchorCell(value=v, is_heading=True) for v in TRIPLE_HEADER)
    rows = [header]
    for t in triples:
        s, p, o = t
        rows.append((AnchorCell(value=str(s)), AnchorCell(value=str(p)), AnchorCell(value=str(o))))
    return Table(grid=tuple(rows), properties=tuple((str(k), str(v)) for k, v in properties))


def table_to_triples(table: Table) -> list[tuple[str, str, str]]:
    """Inverse of :func:`triples_to_table` (data rows only)."""
    return [
        (cell_at(table, Coord(r, 0)).value,
         cell_at(table, Coord(r, 1)).value,
         cell_at(table, Coord(r, 2)).value)
        for r in range(1, table.n_rows)
    ]


def kv_to_table(
    pairs: Sequence[tuple[str, str]],
    properties: Sequence[tuple[str, str]] = (),
) -> Table:
    """Two columns; keys in the first column marked as row headings."""
    if not pairs:
        raise EmptyInputError("cannot build a table from an empty pair list")
    grid = tuple(
        (AnchorCell(value=str(k), is_heading=True), AnchorCell(value=str(v)))
        for k, v in pairs
    )
    return Table(grid=grid, properties=tuple((str(k), str(v)) for k, v in properties))


def table_to_pairs(table: Table) -> list[tuple[str, str]]:
    """Inverse of :func:`kv_to_table`."""
    return [
        (cell_at(table, Coord(r, 0)).value, cell_at(table, Coord(r, 1)).value)
        for r in range(table.n_rows)
    ]


def highlighted_table_payload_to_table(
    payload: Mapping,
    properties: Sequence[tuple[str, str]] = (),
) -> Table:
    """Parse a canonical table payload and apply its highlight list.

    Highlights pointing at covered positions mark the governing anchor;
    marking an already-highlighted anchor again is a no-op.
    """
    table = table_from_payload(dict(payload))
    if properties:
        props = tuple(table.properties) + tuple((str(k), str(v)) for k, v in properties)
        table = Table(grid=table.grid, properties=props)
    violations = validate(table)
    if violations:
        raise IngestionError(
            "table payload violates invariants: " + "; ".join(v.message for v in violations)
        )
    highlights = payload.get("highlights", [])
    if not isinstance(highlights, list):
        raise ParseError("'highlights' must be an array of [row, col] pairs")
    for i, pair in enumerate(highlights):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ParseError(f"highlight {i} must be a [row, col] pair")
        at = Coord(int(pair[0]), int(pair[1]))
        if not cell_at(table, at).is_highlighted:
            table = toggle_highlight(table, at)
    return table


def merge_tables_vertically(upper: Table, lower: Table, separator_heading: str) -> Table:
    """Stack two tables, each preceded by a full-width merged heading row.

    The heading rows are titled ``"{separator_heading} 1"`` and
    ``"{separator_heading} 2"``. The narrower table is right-padded with
    empty cells; covered-cell links are shifted to the stacked positions.
    """
    width = max(upper.n_cols, lower.n_cols)
    rows: list[tuple] = []

    def heading_row(title: str) -> tuple:
        anchor = AnchorCell(value=title, is_heading=True, col_span=width)
        covered = tuple(CoveredCell(anchor=Coord(len(rows), 0)) for _ in range(width - 1))
        return (anchor,) + covered

    def append_table(src: Table) -> None:
        row_offset = len(rows)
        pad = width - src.n_cols
        for row in src.grid:
            shifted = tuple(
                CoveredCell(anchor=Coord(c.anchor.row + row_offset, c.anchor.col))
                if isinstance(c, CoveredCell)
                else c
                for c in row
            )
            rows.append(shifted + tuple(AnchorCell() for _ in range(pad)))

    for i, src in enumerate((upper, lower)):
        rows.append(heading_row(f"{separator_heading} {i + 1}"))
        append_table(src)
    properties = tuple(upper.properties) + tuple(lower.properties)
    return Table(grid=tuple(rows), properties=properties)


# --- example (de)serialization ------------------------------------------------


def example_to_record(example: TableExample, data_type: str) -> dict:
    """One canonical JSONL record for an example, round-trippable through
    :func:`record_to_example`."""
    table = example.table
    if data_type == "graph":
        payload = {"triples": [list(t) for t in table_to_triples(table)]}
    elif data_type == "key_value":
        payload = {"pairs": [list(p) for p in table_to_pairs(table)]}
    else:
        payload = table_to_payload(table)
        payload.pop("properties", None)
        highlights = [[r, c] for (r, c), _ in highlighted_cells(table)]
        if highlights:
            # Spans/headings stay in the cell objects; highlights ride separately
            # so the payload mirrors how highlighted datasets distribute them.
            for row in payload["cells"]:
                for cell in row:
                    cell.pop("highlighted", None)
            payload["highlights"] = highlights
    return {
        "type": data_type,
        "payload": payload,
        "properties": [[k, v] for k, v in table.properties],
        "references": list(example.references),
    }


def record_to_example(record: Mapping) -> TableExample:
    """Parse one canonical JSONL record into a TableExample."""
    if not isinstance(record, Mapping):
        raise ParseError(f"record must be an object, got {type(record).__name__}")
    data_type = record.get("type")
    if data_type not in DATA_TYPES:
        raise ParseError(f"record 'type' must be one of {DATA_TYPES}, got {data_type!r}")
    payload = record.get("payload")
    if not isinstance(payload, Mapping):
        raise ParseError("record needs an object 'payload'")
    properties = record.get("properties", [])
    if not isinstance(properties, list) or any(
        not isinstance(p, (list, tuple)) or len(p) != 2 for p in properties
    ):
        raise ParseError("'properties' must be an array of [key, value] pairs")
    props = [(str(k), str(v)) for k, v in properties]
    if data_type == "graph":
        triples = payload.get("triples")
        if not isinstance(triples, list) or any(
            not isinstance(t, (list, tuple)) or len(t) != 3 for t in triples
        ):
            raise ParseError("graph payload needs 'triples': [[s, p, o], ...]")
        table = triples_to_table([tuple(map(str, t)) for t in triples], props)
    elif data_type == "key_value":
        pairs = payload.get("pairs")
        if not isinstance(pairs, list) or any(
            not isinstance(p, (list, tuple)) or len(p) != 2 for p in pairs
        ):
            raise ParseError("key_value payload needs 'pairs': [[k, v], ...]")
        table = kv_to_table([(str(k), str(v)) for k, v in pairs], props)
    else:
        table = highlighted_table_payload_to_table(payload, props)
    references = record.get("references")
    if not isinstance(references, list) or not references:
        raise ParseError("record needs a non-empty 'references' array")
    try:
        return TableExample(table=table, references=tuple(str(r) for r in references))
    except ValueError as e:
        raise ParseError(str(e)) from e


# --- loader registry ----------------------------------------------------------


class LoaderRegistry:
    """Append-only registry of custom dataset loaders."""

    def __init__(self):
        self._lock = threading.Lock()
        self._loaders: dict[str, tuple[LoaderSpec, RowMapper]] = {}

    def register(self, spec: LoaderSpec, row_mapper: RowMapper) -> LoaderSpec:
        with self._lock:
            if spec.id in self._loaders:
                raise ConflictError(f"loader id {spec.id!r} is already registered")
            self._loaders[spec.id] = (spec, row_mapper)
        return spec

    def get(self, loader_id: str) -> tuple[LoaderSpec, RowMapper] | None:
        return self._loaders.get(loader_id)

    def ids(self) -> list[str]:
        return sorted(self._loaders)


DEFAULT_LOADER_REGISTRY = LoaderRegistry()


def register_loader(
    spec: LoaderSpec, row_mapper: RowMapper, registry: LoaderRegistry | None = None
) -> LoaderSpec:
    return (registry or DEFAULT_LOADER_REGISTRY).register(spec, row_mapper)


def list_loaders(registry: LoaderRegistry | None = None) -> list[str]:
    return (registry or DEFAULT_LOADER_REGISTRY).ids()


# --- dataset loading ----------------------------------------------------------


def _read_info(info_path: Path) -> DatasetInfo:
    try:
        raw = json.loads(info_path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise NotFoundError(f"missing dataset manifest {info_path}")
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, file=str(info_path), line=e.lineno)
    try:
        return DatasetInfo(
            id=raw["id"],
            name=raw.get("name", raw["id"]),
            description=raw.get("description", ""),
            homepage=raw.get("homepage", ""),
            license=raw.get("license", ""),
            version=raw.get("version", ""),
            data_type=raw.get("data_type", "table"),
            split_sizes={str(k): int(v) for k, v in raw.get("split_sizes", {}).items()},
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad dataset manifest: {e}", file=str(info_path))


def _read_jsonl(path: Path, mapper: Callable[[dict], TableExample]) -> list[TableExample]:
    examples = []
    with path.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(f"invalid JSON: {e.msg}", file=str(path), line=lineno)
            index = len(examples)
            try:
                example = mapper(record)
            except (ParseError, BoundsError, IngestionError, EmptyInputError) as e:
                raise IngestionError(f"{path}:{lineno}: example {index}: {e}") from e
            violations = validate(example.table)
            if violations:
                raise IngestionError(
                    f"{path}:{lineno}: example {index} violates table invariants: "
                    + "; ".join(v.message for v in violations)
                )
            examples.append(example)
    return examples


def _available_splits(dataset_dir: Path) -> list[str]:
    return sorted(p.stem for p in dataset_dir.glob("*.jsonl"))


def load_dataset_info(dataset_id: str, dataset_dir: Path | str = "datasets") -> DatasetInfo:
    """Read a dataset's manifest without loading any split."""
    return _read_info(Path(dataset_dir) / dataset_id / "info.json")


def known_dataset_ids(dataset_dir: Path | str = "datasets") -> list[str]:
    root = Path(dataset_dir)
    if not root.is_dir():
        return []
    return sorted(p.parent.name for p in root.glob("*/info.json"))


def load_dataset(
    dataset_id: str,
    split: str | None = None,
    dataset_dir: Path | str = "datasets",
    registry: LoaderRegistry | None = None,
) -> Dataset:
    """Load a dataset by id, either through a registered custom loader or
    from the canonical on-disk layout.

    With ``split=None`` every split that has a file on disk is loaded; a
    manifest-only dataset loads with empty splits. Loaded split lengths
    must match the manifest's ``split_sizes``.
    """
    registry = registry or DEFAULT_LOADER_REGISTRY
    registered = registry.get(dataset_id)
    if registered is not None:
        spec, mapper = registered
        source = Path(spec.source_path)
        info_path = source / "info.json"
        if info_path.exists():
            info = _read_info(info_path)
        else:
            info = DatasetInfo(
                id=spec.id,
                name=spec.options.get("name", spec.id),
                description=spec.options.get("description", ""),
                license=spec.options.get("license", ""),
                data_type=spec.data_type,
            )
        source_dir = source
        record_mapper = mapper
    else:
        source_dir = Path(dataset_dir) / dataset_id
        if not (source_dir / "info.json").exists():
            known = sorted(set(known_dataset_ids(dataset_dir)) | set(registry.ids()))
            raise NotFoundError(f"unknown dataset {dataset_id!r}; known ids: {known}")
        info = _read_info(source_dir / "info.json")
        record_mapper = record_to_example

    wanted = [split] if split is not None else _available_splits(source_dir)
    if split is not None and not (source_dir / f"{split}.jsonl").exists():
        raise NotFoundError(
            f"dataset {dataset_id!r} has no split {split!r}; "
            f"available: {_available_splits(source_dir)}"
        )
    splits: dict[str, tuple[TableExample, ...]] = {}
    for name in wanted:
        examples = _read_jsonl(source_dir / f"{name}.jsonl", record_mapper)
        declared = info.split_sizes.get(name)
        if declared is not None and declared != len(examples):
            raise IngestionError(
                f"dataset {dataset_id!r} split {name!r}: manifest declares {declared} "
                f"examples but {len(examples)} were loaded"
            )
        splits[name] = tuple(examples)
    if registered is not None and not info.split_sizes:
        info = DatasetInfo(
            id=info.id,
            name=info.name,
            description=info.description,
            homepage=info.homepage,
            license=info.license,
            version=info.version,
            data_type=info.data_type,
            split_sizes={k: len(v) for k, v in splits.items()},
        )
    return Dataset(info=info, splits=splits)


def load_all_datasets(
    dataset_dir: Path | str, registry: LoaderRegistry | None = None
) -> dict[str, Dataset]:
    """Load every dataset found under ``dataset_dir``, keyed by id."""
    root = Path(dataset_dir)
    if not root.is_dir():
        raise NotFoundError(f"dataset directory {root} does not exist")
    return {
        ds_id: load_dataset(ds_id, dataset_dir=root, registry=registry)
        for ds_id in known_dataset_ids(root)
    }
