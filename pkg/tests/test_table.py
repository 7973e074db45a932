import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tabbench.adapters import kv_to_table
from tabbench.errors import BoundsError, MergeConflictError, ParseError
from tabbench.table import (
    AnchorCell,
    Coord,
    CoveredCell,
    Table,
    cell_at,
    highlighted_cells,
    merge_cells,
    set_cell_value,
    table_from_payload,
    table_to_payload,
    toggle_highlight,
    validate,
)

from conftest import anchors_of, plain_table, tables


def test_cell_at_identity():
    t = plain_table([["x"]])
    view = cell_at(t, Coord(0, 0))
    assert view.value == "x"
    assert view.anchor == (0, 0)
    assert (view.row_span, view.col_span) == (1, 1)


def test_cell_at_resolves_covered_to_anchor():
    t = merge_cells(plain_table([["merged", "b", "c"]]), Coord(0, 0), 1, 3)
    view = cell_at(t, Coord(0, 2))
    assert view.value == "merged"
    assert view.anchor == (0, 0)
    assert view.col_span == 3


def test_cell_at_out_of_bounds_names_index():
    t = plain_table([["a", "b"], ["c", "d"]])
    with pytest.raises(BoundsError) as err:
        cell_at(t, Coord(2, 0))
    assert "2" in str(err.value)
    assert err.value.row == 2
    with pytest.raises(BoundsError):
        cell_at(t, Coord(0, -1))


def test_set_value_through_covered_updates_whole_span():
    t = merge_cells(plain_table([["old", "b", "c"]]), Coord(0, 0), 1, 3)
    t2 = set_cell_value(t, Coord(0, 1), "new")
    for c in range(3):
        assert cell_at(t2, Coord(0, c)).value == "new"
    # original untouched (tables are values)
    assert cell_at(t, Coord(0, 0)).value == "old"


def test_set_value_write_then_read():
    t = plain_table([["a"]])
    assert cell_at(set_cell_value(t, Coord(0, 0), "v"), Coord(0, 0)).value == "v"


def test_edit_changes_exactly_one_anchor():
    t = kv_to_table([("name", "Café Sicilia"), ("eatType", "coffee shop")])
    t2 = set_cell_value(t, Coord(0, 1), "the National Theatre")
    changed = [
        (r, c)
        for r in range(t.n_rows)
        for c in range(t.n_cols)
        if t.grid[r][c] != t2.grid[r][c]
    ]
    assert changed == [(0, 1)]
    assert cell_at(t2, Coord(0, 1)).value == "the National Theatre"


def test_toggle_highlight_is_involution():
    t = plain_table([["a", "b"], ["c", "d"]])
    assert toggle_highlight(toggle_highlight(t, Coord(1, 1)), Coord(1, 1)) == t


def test_toggle_on_covered_flips_anchor():
    t = merge_cells(plain_table([["a", "b"], ["c", "d"]]), Coord(0, 0), 2, 1)
    t2 = toggle_highlight(t, Coord(1, 0))
    assert cell_at(t2, Coord(0, 0)).is_highlighted
    assert highlighted_cells(t2) == [(Coord(0, 0), "a")]


def test_toggle_changes_nothing_else():
    t = merge_cells(plain_table([["a", "b", "c"]]), Coord(0, 1), 1, 2)
    t2 = toggle_highlight(t, Coord(0, 1))
    before = cell_at(t, Coord(0, 1))
    after = cell_at(t2, Coord(0, 1))
    assert after.value == before.value
    assert after.is_heading == before.is_heading
    assert (after.row_span, after.col_span) == (before.row_span, before.col_span)


def test_merge_produces_covered_cells():
    t = merge_cells(plain_table([["a", "b", "c"]]), Coord(0, 0), 1, 3)
    assert t.grid[0][1] == CoveredCell(anchor=Coord(0, 0))
    assert t.grid[0][2] == CoveredCell(anchor=Coord(0, 0))
    assert validate(t) == []


def test_merge_overlap_is_conflict():
    t = merge_cells(plain_table([["a", "b", "c", "d"]]), Coord(0, 0), 1, 2)
    with pytest.raises(MergeConflictError):
        merge_cells(t, Coord(0, 1), 1, 2)


def test_merge_out_of_bounds():
    with pytest.raises(BoundsError):
        merge_cells(plain_table([["a", "b"]]), Coord(0, 1), 1, 2)


def test_validate_ok_on_fixtures(fixture_examples):
    for ds_id, split, i, example in fixture_examples:
        assert validate(example.table) == [], f"{ds_id}/{split}/{i}"


def test_validate_reports_dangling_covered():
    grid = ((AnchorCell(value="a"), CoveredCell(anchor=Coord(0, 0))),)
    violations = validate(Table(grid=grid))
    assert any(v.code == "dangling-covered" and v.at == (0, 1) for v in violations)


def test_validate_reports_ragged_rows():
    grid = ((AnchorCell(value="a"), AnchorCell(value="b")), (AnchorCell(value="c"),))
    violations = validate(Table(grid=grid))
    assert any(v.code == "non-rectangular" for v in violations)


def test_validate_reports_span_out_of_bounds():
    grid = ((AnchorCell(value="a", col_span=3), AnchorCell(value="b")),)
    violations = validate(Table(grid=grid))
    assert any(v.code == "span-out-of-bounds" for v in violations)


def test_validate_reports_overlapping_spans():
    grid = (
        (AnchorCell(value="a", col_span=2), AnchorCell(value="b")),
    )
    violations = validate(Table(grid=grid))
    assert any(v.code == "overlapping-spans" for v in violations)


def test_highlighted_cells_empty():
    assert highlighted_cells(plain_table([["a", "b"]])) == []


def test_highlighted_cells_row_major_order():
    t = plain_table([["a", "b"], ["c", "d"]])
    for at in [Coord(1, 1), Coord(0, 1), Coord(1, 0)]:
        t = toggle_highlight(t, at)
    assert highlighted_cells(t) == [
        (Coord(0, 1), "b"),
        (Coord(1, 0), "c"),
        (Coord(1, 1), "d"),
    ]


def test_highlighted_merged_anchor_counted_once():
    t = merge_cells(plain_table([["a", "b", "c"]]), Coord(0, 0), 1, 3)
    t = toggle_highlight(t, Coord(0, 2))
    assert highlighted_cells(t) == [(Coord(0, 0), "a")]


# --- serialization -------------------------------------------------------------


def test_payload_round_trip_preserves_structure():
    t = merge_cells(plain_table([["a", "b", "c"], ["d", "e", "f"]],
                                properties=(("title", "x"), ("title", "y"))),
                    Coord(0, 0), 2, 1)
    t = toggle_highlight(t, Coord(0, 2))
    assert table_from_payload(table_to_payload(t)) == t


def test_payload_defaults_on_input():
    t = table_from_payload({"cells": [[{"value": "a"}, {"value": "b", "heading": True}]]})
    assert t.grid[0][0] == AnchorCell(value="a")
    assert t.grid[0][1].is_heading


def test_payload_output_is_explicit():
    payload = table_to_payload(plain_table([["a"]]))
    assert payload["cells"][0][0] == {
        "value": "a",
        "heading": False,
        "highlighted": False,
        "rowspan": 1,
        "colspan": 1,
    }
    assert payload["n_rows"] == 1 and payload["n_cols"] == 1


def test_payload_declared_shape_mismatch():
    with pytest.raises(ParseError):
        table_from_payload({"n_rows": 2, "cells": [[{"value": "a"}]]})


def test_payload_malformed():
    with pytest.raises(ParseError):
        table_from_payload({"cells": []})
    with pytest.raises(ParseError):
        table_from_payload({"cells": [[{"covered": [0]}]]})
    with pytest.raises(ParseError):
        table_from_payload([1, 2])


# --- properties ----------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(tables())
def test_every_coord_resolves_and_anchor_contains_it(t):
    for at in t.coords():
        view = cell_at(t, at)
        r0, c0 = view.anchor
        assert r0 <= at.row < r0 + view.row_span
        assert c0 <= at.col < c0 + view.col_span
        assert isinstance(t.grid[r0][c0], AnchorCell)


@settings(max_examples=60, deadline=None)
@given(tables(), st.randoms(use_true_random=False))
def test_validate_preserved_by_operations(t, rng):
    assert validate(t) == []
    for _ in range(8):
        at = Coord(rng.randrange(t.n_rows), rng.randrange(t.n_cols))
        op = rng.randrange(3)
        if op == 0:
            t = set_cell_value(t, at, "edited")
        elif op == 1:
            t = toggle_highlight(t, at)
        else:
            rs = rng.randint(1, 2)
            cs = rng.randint(1, 2)
            try:
                t = merge_cells(t, at, rs, cs)
            except (MergeConflictError, BoundsError):
                pass
        assert validate(t) == []


@settings(max_examples=60, deadline=None)
@given(tables())
def test_merge_lookup_law(t):
    rng = random.Random(42)
    free = [
        (r, c)
        for r, c, cell in anchors_of(t)
        if cell.row_span == 1 and cell.col_span == 1
    ]
    rng.shuffle(free)
    for r, c in free[:3]:
        rs = min(2, t.n_rows - r)
        cs = min(2, t.n_cols - c)
        try:
            merged = merge_cells(t, Coord(r, c), rs, cs)
        except MergeConflictError:
            continue
        expected = cell_at(merged, Coord(r, c)).value
        for rr in range(r, r + rs):
            for cc in range(c, c + cs):
                assert cell_at(merged, Coord(rr, cc)).value == expected
        t = merged


@settings(max_examples=60, deadline=None)
@given(tables())
def test_property_order_survives_operations(t):
    before = t.properties
    t = set_cell_value(t, Coord(0, 0), "x")
    t = toggle_highlight(t, Coord(t.n_rows - 1, t.n_cols - 1))
    assert t.properties == before
