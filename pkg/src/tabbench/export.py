"""Exporters: single examples to json/csv/txt/html/xlsx, whole splits to
per-example files, and error-analysis annotation sheets.

csv never contains properties; the other formats include them when
``include_properties`` is set. json is the round-trippable canonical
serialization plus the reference texts.
"""

from __future__ import annotations

import csv
import html
import io
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from . import xlsx
from .adapters import Dataset, load_dataset
from .errors import CoverageError, FormatError
from .linearize import linearize
from .table import (
    AnchorCell,
    Table,
    TableExample,
    table_from_payload,
    table_to_payload,
)

EXPORT_FORMATS = ("xlsx", "html", "json", "txt", "csv")

CONTENT_TYPES = {
    "json": "application/json",
    "csv": "text/csv; charset=utf-8",
    "txt": "text/plain; charset=utf-8",
    "html": "text/html; charset=utf-8",
    "xlsx": "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
}


@dataclass(frozen=True)
class ExportRequest:
    dataset_id: str
    split: str
    format: str
    out_dir: Path
    include_properties: bool = True
    single_file: bool = False

    def __post_init__(self):
        if self.format not in EXPORT_FORMATS:
            raise FormatError(
                f"unknown export format {self.format!r}; supported: {', '.join(EXPORT_FORMATS)}"
            )


def _grid_values(table: Table) -> list[list[str]]:
    """Row-major grid with anchor values at anchor positions and empty
    strings at covered positions."""
    return [
        [cell.value if isinstance(cell, AnchorCell) else "" for cell in row]
        for row in table.grid
    ]


def _export_json(example: TableExample) -> bytes:
    payload = table_to_payload(example.table)
    payload["references"] = list(example.references)
    return (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def parse_json_export(data: bytes) -> TableExample:
    """Inverse of the json exporter; used for round-trip checks."""
    obj = json.loads(data.decode("utf-8"))
    references = tuple(obj.pop("references", []))
    return TableExample(table=table_from_payload(obj), references=references)


def _export_csv(example: TableExample) -> bytes:
    # RFC 4180: CRLF line endings, grid only, never any properties.
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\r\n")
    writer.writerows(_grid_values(example.table))
    return out.getvalue().encode("utf-8")


def _export_txt(example: TableExample, include_properties: bool) -> bytes:
    lines = []
    if include_properties and example.table.properties:
        lines.extend(f"{k}: {v}" for k, v in example.table.properties)
        lines.append("")
    lines.extend("\t".join(row) for row in _grid_values(example.table))
    return ("\n".join(lines) + "\n").encode("utf-8")


_HTML_STYLE = (
    "table { border-collapse: collapse; }\n"
    "td, th { border: 1px solid #999; padding: 4px 8px; }\n"
    ".highlighted { background: #fff3b0; }\n"
)


def _export_html(example: TableExample, include_properties: bool) -> bytes:
    table = example.table
    parts = [
        "<!DOCTYPE html>",
        '<html><head><meta charset="utf-8"><title>table</title>',
        f"<style>\n{_HTML_STYLE}</style></head><body>",
    ]
    if include_properties and table.properties:
        parts.append('<dl class="properties">')
        for k, v in table.properties:
            parts.append(f"<dt>{html.escape(k)}</dt><dd>{html.escape(v)}</dd>")
        parts.append("</dl>")
    parts.append("<table>")
    for row in table.grid:
        cells = []
        for cell in row:
            if not isinstance(cell, AnchorCell):
                continue
            tag = "th" if cell.is_heading else "td"
            attrs = ""
            if cell.row_span > 1:
                attrs += f' rowspan="{cell.row_span}"'
            if cell.col_span > 1:
                attrs += f' colspan="{cell.col_span}"'
            if cell.is_highlighted:
                attrs += ' class="highlighted"'
            cells.append(f"<{tag}{attrs}>{html.escape(cell.value)}</{tag}>")
        parts.append("<tr>" + "".join(cells) + "</tr>")
    parts.append("</table></body></html>")
    return ("\n".join(parts) + "\n").encode("utf-8")


def _table_sheet(name: str, example: TableExample, include_properties: bool) -> xlsx.Sheet:
    sheet = xlsx.Sheet(name=name)
    table = example.table
    offset = 0
    if include_properties and table.properties:
        for k, v in table.properties:
            sheet.append([(k, xlsx.STYLE_BOLD), (v, xlsx.STYLE_DEFAULT)])
            offset += 1
    for r, row in enumerate(table.grid):
        cells: list[tuple[str, int] | None] = []
        for cell in row:
            if not isinstance(cell, AnchorCell):
                cells.append(None)
                continue
            style = xlsx.STYLE_DEFAULT
            if cell.is_heading and cell.is_highlighted:
                style = xlsx.STYLE_BOLD_HIGHLIGHT
            elif cell.is_heading:
                style = xlsx.STYLE_BOLD
            elif cell.is_highlighted:
                style = xlsx.STYLE_HIGHLIGHT
            cells.append((cell.value, style))
            if cell.row_span > 1 or cell.col_span > 1:
                sheet.merges.append((r + offset, len(cells) - 1, cell.row_span, cell.col_span))
        sheet.append(cells)
    return sheet


def _export_xlsx(example: TableExample, include_properties: bool) -> bytes:
    return xlsx.write_workbook([_table_sheet("table", example, include_properties)])


def export_example(
    example: TableExample, format: str, include_properties: bool = True
) -> bytes:
    """Serialize one example to the requested format."""
    if format == "json":
        return _export_json(example)
    if format == "csv":
        return _export_csv(example)
    if format == "txt":
        return _export_txt(example, include_properties)
    if format == "html":
        return _export_html(example, include_properties)
    if format == "xlsx":
        return _export_xlsx(example, include_properties)
    raise FormatError(
        f"unknown export format {format!r}; supported: {', '.join(EXPORT_FORMATS)}"
    )


def export_split(
    request: ExportRequest,
    dataset: Dataset | None = None,
    dataset_dir: Path | str = "datasets",
) -> list[Path]:
    """Write one file per example (``{index:06d}.{ext}``) into
    ``request.out_dir``; returns the written paths in index order.

    With ``single_file`` and the xlsx format, a single workbook with one
    sheet per example is written instead.
    """
    if dataset is None:
        dataset = load_dataset(request.dataset_id, split=request.split, dataset_dir=dataset_dir)
    examples = dataset.split(request.split)
    out_dir = Path(request.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if request.single_file and request.format == "xlsx":
        sheets = [
            _table_sheet(f"{i:06d}", example, request.include_properties)
            for i, example in enumerate(examples)
        ]
        path = out_dir / f"{request.dataset_id}-{request.split}.xlsx"
        path.write_bytes(xlsx.write_workbook(sheets))
        return [path]

    manifest = []
    for i, example in enumerate(examples):
        path = out_dir / f"{i:06d}.{request.format}"
        path.write_bytes(export_example(example, request.format, request.include_properties))
        manifest.append(path)
    return manifest


def make_annotation_sheet(
    dataset: Dataset,
    split: str,
    system_outputs: Sequence[tuple[str, Mapping[int, str]]],
    count: int,
    seed: int,
    out_file: Path | str,
) -> Path:
    """Write an error-analysis workbook of sampled examples and system
    outputs, with empty annotation columns.

    Samples ``min(count, split size)`` distinct indices with a PRNG seeded
    by ``seed``, so the same seed reproduces the same sheet. Every system
    must cover every sampled index.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    examples = dataset.split(split)
    k = min(count, len(examples))
    indices = random.Random(seed).sample(range(len(examples)), k)
    for system_id, outputs in system_outputs:
        for index in indices:
            if index not in outputs:
                raise CoverageError(system_id, index)

    header = ["example_idx", "properties", "table_linearized", "reference"]
    header += [f"{system_id}_output" for system_id, _ in system_outputs]
    header += ["error_category", "notes"]
    sheet = xlsx.Sheet(name=f"{dataset.info.id}-{split}")
    sheet.append([(h, xlsx.STYLE_BOLD) for h in header])
    for index in indices:
        example = examples[index]
        props = "; ".join(f"{key}: {value}" for key, value in example.table.properties)
        row = [
            (str(index), xlsx.STYLE_DEFAULT),
            (props, xlsx.STYLE_DEFAULT),
            (linearize(example.table), xlsx.STYLE_DEFAULT),
            (example.references[0], xlsx.STYLE_DEFAULT),
        ]
        row += [(outputs[index], xlsx.STYLE_DEFAULT) for _, outputs in system_outputs]
        row += [("", xlsx.STYLE_DEFAULT), ("", xlsx.STYLE_DEFAULT)]
        sheet.append(row)

    out_path = Path(out_file)
    if out_path.parent and not out_path.parent.exists():
        out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(xlsx.write_workbook([sheet]))
    return out_path
