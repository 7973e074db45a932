"""Canonical table model: a rectangular grid of cells with merge spans,
heading/highlight flags, and ordered key-value properties.

Tables are immutable values. Mutating operations return a new table, so
tables can be shared freely across concurrent readers.

A grid position holds either an :class:`AnchorCell` (carries the value and
flags, and may span a rectangle of positions) or a :class:`CoveredCell`
(part of a merged region, linked back to its anchor). Looking up any
position inside a merged region resolves to the anchor's value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterator, NamedTuple, Sequence

from .errors import BoundsError, MergeConflictError, ParseError


class Coord(NamedTuple):
    row: int
    col: int


@dataclass(frozen=True)
class AnchorCell:
    """A value-bearing cell; the top-left of its (possibly 1x1) span."""

    value: str = ""
    is_heading: bool = False
    is_highlighted: bool = False
    row_span: int = 1
    col_span: int = 1


@dataclass(frozen=True)
class CoveredCell:
    """A position inside a merged region, linked to the region's anchor."""

    anchor: Coord


Cell = AnchorCell | CoveredCell


class CellView(NamedTuple):
    """A resolved view of a grid position: covered positions report their
    anchor's fields."""

    value: str
    is_heading: bool
    is_highlighted: bool
    anchor: Coord
    row_span: int
    col_span: int


@dataclass(frozen=True)
class Table:
    grid: tuple[tuple[Cell, ...], ...]
    properties: tuple[tuple[str, str], ...] = ()

    @property
    def n_rows(self) -> int:
        return len(self.grid)

    @property
    def n_cols(self) -> int:
        return len(self.grid[0]) if self.grid else 0

    def coords(self) -> Iterator[Coord]:
        for r in range(self.n_rows):
            for c in range(self.n_cols):
                yield Coord(r, c)


@dataclass(frozen=True)
class TableExample:
    """A table paired with its gold reference texts."""

    table: Table
    references: tuple[str, ...]

    def __post_init__(self):
        if not self.references:
            raise ValueError("an example needs at least one reference text")
        if any(not r.strip() for r in self.references):
            raise ValueError("references must be non-empty after trimming")


@dataclass(frozen=True)
class Violation:
    """One invariant violation found by :func:`validate`."""

    code: str
    message: str
    at: Coord | None = None


def make_table(
    values: Sequence[Sequence[str]],
    properties: Sequence[tuple[str, str]] = (),
    heading_rows: int = 0,
    heading_cols: int = 0,
) -> Table:
    """Build an unmerged table from a 2D list of strings, marking the first
    ``heading_rows`` rows / ``heading_cols`` columns as headings."""
    grid = tuple(
        tuple(
            AnchorCell(value=str(v), is_heading=(r < heading_rows or c < heading_cols))
            for c, v in enumerate(row)
        )
        for r, row in enumerate(values)
    )
    return Table(grid=grid, properties=tuple((str(k), str(v)) for k, v in properties))


def _check_bounds(table: Table, at: Coord) -> None:
    row, col = at
    if not (0 <= row < table.n_rows):
        raise BoundsError(
            f"row {row} out of range for {table.n_rows}x{table.n_cols} table", row=row
        )
    if not (0 <= col < table.n_cols):
        raise BoundsError(
            f"col {col} out of range for {table.n_rows}x{table.n_cols} table", col=col
        )


def _anchor_coord(table: Table, at: Coord) -> Coord:
    """Coordinate of the anchor governing ``at`` (itself if already an anchor)."""
    cell = table.grid[at.row][at.col]
    if isinstance(cell, AnchorCell):
        return Coord(*at)
    return Coord(*cell.anchor)


def cell_at(table: Table, at: Coord) -> CellView:
    """Resolve a grid position to its governing anchor's fields."""
    at = Coord(*at)
    _check_bounds(table, at)
    anchor_at = _anchor_coord(table, at)
    _check_bounds(table, anchor_at)
    anchor = table.grid[anchor_at.row][anchor_at.col]
    if not isinstance(anchor, AnchorCell):
        raise BoundsError(
            f"covered cell at ({at.row}, {at.col}) links to ({anchor_at.row}, {anchor_at.col}), "
            "which is not an anchor",
            row=anchor_at.row,
            col=anchor_at.col,
        )
    return CellView(
        value=anchor.value,
        is_heading=anchor.is_heading,
        is_highlighted=anchor.is_highlighted,
        anchor=anchor_at,
        row_span=anchor.row_span,
        col_span=anchor.col_span,
    )


def _replace_cell(table: Table, at: Coord, cell: Cell) -> Table:
    row = table.grid[at.row]
    new_row = row[: at.col] + (cell,) + row[at.col + 1 :]
    new_grid = table.grid[: at.row] + (new_row,) + table.grid[at.row + 1 :]
    return replace(table, grid=new_grid)


def set_cell_value(table: Table, at: Coord, value: str) -> Table:
    """Replace the value of the anchor governing ``at``; returns the new table."""
    at = Coord(*at)
    _check_bounds(table, at)
    anchor_at = _anchor_coord(table, at)
    anchor = table.grid[anchor_at.row][anchor_at.col]
    return _replace_cell(table, anchor_at, replace(anchor, value=value))


def toggle_highlight(table: Table, at: Coord) -> Table:
    """Invert the highlight flag of the anchor governing ``at``."""
    at = Coord(*at)
    _check_bounds(table, at)
    anchor_at = _anchor_coord(table, at)
    anchor = table.grid[anchor_at.row][anchor_at.col]
    return _replace_cell(table, anchor_at, replace(anchor, is_highlighted=not anchor.is_highlighted))


def merge_cells(table: Table, top_left: Coord, row_span: int, col_span: int) -> Table:
    """Merge a rectangle of unmerged 1x1 anchors into one span.

    The top-left cell keeps its value and flags and becomes the anchor; the
    other cells in the rectangle become covered.
    """
    top_left = Coord(*top_left)
    if row_span < 1 or col_span < 1:
        raise MergeConflictError(f"spans must be >= 1, got {row_span}x{col_span}")
    _check_bounds(table, top_left)
    _check_bounds(table, Coord(top_left.row + row_span - 1, top_left.col + col_span - 1))
    for r in range(top_left.row, top_left.row + row_span):
        for c in range(top_left.col, top_left.col + col_span):
            cell = table.grid[r][c]
            if not isinstance(cell, AnchorCell) or cell.row_span != 1 or cell.col_span != 1:
                raise MergeConflictError(
                    f"merge rectangle at ({top_left.row}, {top_left.col}) "
                    f"{row_span}x{col_span} overlaps an existing span at ({r}, {c})"
                )
    anchor = table.grid[top_left.row][top_left.col]
    out = _replace_cell(table, top_left, replace(anchor, row_span=row_span, col_span=col_span))
    for r in range(top_left.row, top_left.row + row_span):
        for c in range(top_left.col, top_left.col + col_span):
            if (r, c) != top_left:
                out = _replace_cell(out, Coord(r, c), CoveredCell(anchor=top_left))
    return out


def highlighted_cells(table: Table) -> list[tuple[Coord, str]]:
    """Highlighted anchors in row-major order of their anchor coordinate."""
    out = []
    for r, row in enumerate(table.grid):
        for c, cell in enumerate(row):
            if isinstance(cell, AnchorCell) and cell.is_highlighted:
                out.append((Coord(r, c), cell.value))
    return out


def validate(table: Table) -> list[Violation]:
    """Check every table invariant; an empty list means the table is ok.

    Violations are returned (not raised) so ingestion can report all
    problems of a bad source record at once.
    """
    violations: list[Violation] = []
    if table.n_rows < 1 or table.n_cols < 1:
        return [Violation("empty", "table must have at least one row and one column")]
    widths = {len(row) for row in table.grid}
    if len(widths) > 1:
        for r, row in enumerate(table.grid):
            if len(row) != table.n_cols:
                violations.append(
                    Violation(
                        "non-rectangular",
                        f"row {r} has {len(row)} cells, expected {table.n_cols}",
                        Coord(r, 0),
                    )
                )
        # Span/coverage checks assume a rectangular grid; stop here.
        return violations

    n_rows, n_cols = table.n_rows, table.n_cols
    owner: dict[Coord, Coord] = {}
    for r in range(n_rows):
        for c in range(n_cols):
            cell = table.grid[r][c]
            if not isinstance(cell, AnchorCell):
                continue
            if cell.row_span < 1 or cell.col_span < 1:
                violations.append(
                    Violation("bad-span", f"anchor at ({r}, {c}) has span "
                              f"{cell.row_span}x{cell.col_span}", Coord(r, c))
                )
                continue
            if r + cell.row_span > n_rows or c + cell.col_span > n_cols:
                violations.append(
                    Violation(
                        "span-out-of-bounds",
                        f"anchor at ({r}, {c}) spans {cell.row_span}x{cell.col_span}, "
                        f"exceeding the {n_rows}x{n_cols} grid",
                        Coord(r, c),
                    )
                )
                continue
            for rr in range(r, r + cell.row_span):
                for cc in range(c, c + cell.col_span):
                    prev = owner.get(Coord(rr, cc))
                    if prev is not None:
                        violations.append(
                            Violation(
                                "overlapping-spans",
                                f"cell ({rr}, {cc}) is claimed by anchors at "
                                f"({prev.row}, {prev.col}) and ({r}, {c})",
                                Coord(rr, cc),
                            )
                        )
                    else:
                        owner[Coord(rr, cc)] = Coord(r, c)

    for r in range(n_rows):
        for c in range(n_cols):
            cell = table.grid[r][c]
            here = Coord(r, c)
            if isinstance(cell, AnchorCell):
                claimed = owner.get(here)
                if claimed is not None and claimed != here:
                    violations.append(
                        Violation(
                            "overlapping-spans",
                            f"anchor at ({r}, {c}) lies inside the span of "
                            f"({claimed.row}, {claimed.col})",
                            here,
                        )
                    )
            else:
                anchor_at = Coord(*cell.anchor)
                target = (
                    table.grid[anchor_at.row][anchor_at.col]
                    if 0 <= anchor_at.row < n_rows and 0 <= anchor_at.col < n_cols
                    else None
                )
                if not isinstance(target, AnchorCell):
                    violations.append(
                        Violation(
                            "dangling-covered",
                            f"covered cell at ({r}, {c}) links to "
                            f"({anchor_at.row}, {anchor_at.col}), which is not an anchor",
                            here,
                        )
                    )
                elif owner.get(here) != anchor_at:
                    violations.append(
                        Violation(
                            "dangling-covered",
                            f"covered cell at ({r}, {c}) is outside the span of its anchor "
                            f"({anchor_at.row}, {anchor_at.col})",
                            here,
                        )
                    )
    return violations


# --- canonical serialization ------------------------------------------------
#
# {"n_rows": int, "n_cols": int, "properties": [[k, v], ...],
#  "cells": [[cell, ...], ...]} where a cell is either
# {"value": str, "heading": bool, "highlighted": bool, "rowspan": int, "colspan": int}
# or {"covered": [row, col]}. On input, spans default to 1 and flags to false;
# on output everything is written explicitly.


def table_to_payload(table: Table) -> dict:
    cells = []
    for row in table.grid:
        out_row = []
        for cell in row:
            if isinstance(cell, AnchorCell):
                out_row.append(
                    {
                        "value": cell.value,
                        "heading": cell.is_heading,
                        "highlighted": cell.is_highlighted,
                        "rowspan": cell.row_span,
                        "colspan": cell.col_span,
                    }
                )
            else:
                out_row.append({"covered": [cell.anchor.row, cell.anchor.col]})
        cells.append(out_row)
    return {
        "n_rows": table.n_rows,
        "n_cols": table.n_cols,
        "properties": [[k, v] for k, v in table.properties],
        "cells": cells,
    }


def _parse_cell(obj, r: int, c: int) -> Cell:
    if not isinstance(obj, dict):
        raise ParseError(f"cell ({r}, {c}) must be an object, got {type(obj).__name__}")
    if "covered" in obj:
        anchor = obj["covered"]
        if (
            not isinstance(anchor, (list, tuple))
            or len(anchor) != 2
            or not all(isinstance(x, int) for x in anchor)
        ):
            raise ParseError(f"cell ({r}, {c}): 'covered' must be a [row, col] pair")
        return CoveredCell(anchor=Coord(anchor[0], anchor[1]))
    value = obj.get("value", "")
    if not isinstance(value, str):
        raise ParseError(f"cell ({r}, {c}): 'value' must be a string")
    rowspan = obj.get("rowspan", 1)
    colspan = obj.get("colspan", 1)
    if not isinstance(rowspan, int) or not isinstance(colspan, int):
        raise ParseError(f"cell ({r}, {c}): spans must be integers")
    return AnchorCell(
        value=value,
        is_heading=bool(obj.get("heading", False)),
        is_highlighted=bool(obj.get("highlighted", False)),
        row_span=rowspan,
        col_span=colspan,
    )


def table_from_payload(obj) -> Table:
    """Parse the canonical serialization; raises :class:`ParseError` on
    malformed input. Structural invariants are *not* enforced here — run
    :func:`validate` on the result when ingesting untrusted data."""
    if not isinstance(obj, dict):
        raise ParseError(f"table payload must be an object, got {type(obj).__name__}")
    cells = obj.get("cells")
    if not isinstance(cells, list) or not cells:
        raise ParseError("table payload needs a non-empty 'cells' array")
    grid = []
    for r, row in enumerate(cells):
        if not isinstance(row, list):
            raise ParseError(f"row {r} must be an array")
        grid.append(tuple(_parse_cell(cell, r, c) for c, cell in enumerate(row)))
    props = obj.get("properties", [])
    if not isinstance(props, list):
        raise ParseError("'properties' must be an array of [key, value] pairs")
    properties = []
    for i, pair in enumerate(props):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ParseError(f"property {i} must be a [key, value] pair")
        properties.append((str(pair[0]), str(pair[1])))
    table = Table(grid=tuple(grid), properties=tuple(properties))
    declared_rows, declared_cols = obj.get("n_rows"), obj.get("n_cols")
    if declared_rows is not None and declared_rows != table.n_rows:
        raise ParseError(f"declared n_rows {declared_rows} != actual {table.n_rows}")
    if declared_cols is not None and declared_cols != table.n_cols:
        raise ParseError(f"declared n_cols {declared_cols} != actual {table.n_cols}")
    return table


def table_to_json(table: Table) -> str:
    return json.dumps(table_to_payload(table), ensure_ascii=False)


def table_from_json(text: str) -> Table:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    return table_from_payload(obj)
