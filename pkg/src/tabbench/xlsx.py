"""Minimal OOXML spreadsheet writer.

Covers exactly what the exporters need: multiple worksheets, inline
strings, merged regions, bold cells, and a highlight fill. Values are
written as inline strings so no shared-string table is required.
"""

from __future__ import annotations

import zipfile
from dataclasses import dataclass, field
from io import BytesIO
from xml.sax.saxutils import escape

# Cell style indices (cellXfs order in styles.xml).
STYLE_DEFAULT = 0
STYLE_BOLD = 1
STYLE_HIGHLIGHT = 2
STYLE_BOLD_HIGHLIGHT = 3

_XMLNS = "http://schemas.openxmlformats.org/spreadsheetml/2006/main"
_XMLNS_R = "http://schemas.openxmlformats.org/officeDocument/2006/relationships"


def col_letter(col: int) -> str:
    """0-based column index -> spreadsheet letters (0 -> A, 26 -> AA)."""
    letters = ""
    col += 1
    while col:
        col, rem = divmod(col - 1, 26)
        letters = chr(ord("A") + rem) + letters
    return letters


def cell_ref(row: int, col: int) -> str:
    """0-based (row, col) -> A1-style reference."""
    return f"{col_letter(col)}{row + 1}"


@dataclass
class Sheet:
    name: str
    # rows of (text, style) cells; None entries are skipped (covered positions)
    rows: list[list[tuple[str, int] | None]] = field(default_factory=list)
    # (row, col, row_span, col_span), 0-based, spans >= 1
    merges: list[tuple[int, int, int, int]] = field(default_factory=list)

    def append(self, cells: list[tuple[str, int] | None]) -> None:
        self.rows.append(cells)


def _sanitize_sheet_name(name: str, taken: set[str]) -> str:
    clean = "".join("_" if ch in '[]:*?/\\' else ch for ch in name)[:31] or "Sheet"
    candidate, n = clean, 1
    while candidate in taken:
        suffix = f"~{n}"
        candidate = clean[: 31 - len(suffix)] + suffix
        n += 1
    taken.add(candidate)
    return candidate


def _sheet_xml(sheet: Sheet) -> str:
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>',
        f'<worksheet xmlns="{_XMLNS}">',
        "<sheetData>",
    ]
    for r, row in enumerate(sheet.rows):
        cells = []
        for c, cell in enumerate(row):
            if cell is None:
                continue
            text, style = cell
            ref = cell_ref(r, c)
            if text:
                value = escape(text)
                cells.append(
                    f'<c r="{ref}" s="{style}" t="inlineStr">'
                    f'<is><t xml:space="preserve">{value}</t></is></c>'
                )
            else:
                cells.append(f'<c r="{ref}" s="{style}"/>')
        lines.append(f'<row r="{r + 1}">' + "".join(cells) + "</row>")
    lines.append("</sheetData>")
    if sheet.merges:
        refs = "".join(
            f'<mergeCell ref="{cell_ref(r, c)}:{cell_ref(r + rs - 1, c + cs - 1)}"/>'
            for r, c, rs, cs in sheet.merges
        )
        lines.append(f'<mergeCells count="{len(sheet.merges)}">{refs}</mergeCells>')
    lines.append("</worksheet>")
    return "".join(lines)


_STYLES_XML = (
    '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
    f'<styleSheet xmlns="{_XMLNS}">'
    "<fonts count=\"2\"><font/><font><b/></font></fonts>"
    '<fills count="3">'
    '<fill><patternFill patternType="none"/></fill>'
    '<fill><patternFill patternType="gray125"/></fill>'
    '<fill><patternFill patternType="solid"><fgColor rgb="FFFFF3B0"/>'
    '<bgColor indexed="64"/></patternFill></fill>'
    "</fills>"
    "<borders count=\"1\"><border/></borders>"
    '<cellStyleXfs count="1"><xf/></cellStyleXfs>'
    '<cellXfs count="4">'
    '<xf xfId="0"/>'
    '<xf xfId="0" fontId="1" applyFont="1"/>'
    '<xf xfId="0" fillId="2" applyFill="1"/>'
    '<xf xfId="0" fontId="1" fillId="2" applyFont="1" applyFill="1"/>'
    "</cellXfs>"
    "</styleSheet>"
)


def write_workbook(sheets: list[Sheet]) -> bytes:
    """Serialize sheets into a complete .xlsx (zip) file."""
    if not sheets:
        raise ValueError("a workbook needs at least one sheet")
    taken: set[str] = set()
    names = [_sanitize_sheet_name(s.name, taken) for s in sheets]

    sheet_entries = "".join(
        f'<sheet name="{escape(name)}" sheetId="{i + 1}" r:id="rId{i + 1}"/>'
        for i, name in enumerate(names)
    )
    workbook_xml = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        f'<workbook xmlns="{_XMLNS}" xmlns:r="{_XMLNS_R}">'
        f"<sheets>{sheet_entries}</sheets></workbook>"
    )
    rels = "".join(
        f'<Relationship Id="rId{i + 1}" Type="{_XMLNS_R}/worksheet" '
        f'Target="worksheets/sheet{i + 1}.xml"/>'
        for i in range(len(sheets))
    )
    rels += (
        f'<Relationship Id="rId{len(sheets) + 1}" Type="{_XMLNS_R}/styles" '
        'Target="styles.xml"/>'
    )
    workbook_rels = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">'
        f"{rels}</Relationships>"
    )
    root_rels = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<Relationships xmlns="http://schemas.openxmlformats.org/package/2006/relationships">'
        '<Relationship Id="rId1" '
        f'Type="{_XMLNS_R}/officeDocument" Target="xl/workbook.xml"/>'
        "</Relationships>"
    )
    overrides = "".join(
        f'<Override PartName="/xl/worksheets/sheet{i + 1}.xml" '
        'ContentType="application/vnd.openxmlformats-officedocument.'
        'spreadsheetml.worksheet+xml"/>'
        for i in range(len(sheets))
    )
    content_types = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types">'
        '<Default Extension="rels" '
        'ContentType="application/vnd.openxmlformats-package.relationships+xml"/>'
        '<Default Extension="xml" ContentType="application/xml"/>'
        '<Override PartName="/xl/workbook.xml" '
        'ContentType="application/vnd.openxmlformats-officedocument.'
        'spreadsheetml.sheet.main+xml"/>'
        f"{overrides}"
        '<Override PartName="/xl/styles.xml" '
        'ContentType="application/vnd.openxmlformats-officedocument.'
        'spreadsheetml.styles+xml"/>'
        "</Types>"
    )

    def entry(name: str) -> zipfile.ZipInfo:
        # fixed timestamp so equal content yields byte-identical workbooks
        info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
        info.compress_type = zipfile.ZIP_DEFLATED
        return info

    buffer = BytesIO()
    with zipfile.ZipFile(buffer, "w") as zf:
        zf.writestr(entry("[Content_Types].xml"), content_types)
        zf.writestr(entry("_rels/.rels"), root_rels)
        zf.writestr(entry("xl/workbook.xml"), workbook_xml)
        zf.writestr(entry("xl/_rels/workbook.xml.rels"), workbook_rels)
        zf.writestr(entry("xl/styles.xml"), _STYLES_XML)
        for i, sheet in enumerate(sheets):
            zf.writestr(entry(f"xl/worksheets/sheet{i + 1}.xml"), _sheet_xml(sheet))
    return buffer.getvalue()
