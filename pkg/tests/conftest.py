import random
from pathlib import Path

import pytest
from hypothesis import strategies as st

from tabbench.adapters import load_all_datasets
from tabbench.table import AnchorCell, Coord, CoveredCell, Table, merge_cells

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
DATASET_DIR = FIXTURES / "datasets"
OUTPUT_DIR = FIXTURES / "outputs"


@pytest.fixture(scope="session")
def dataset_dir() -> Path:
    return DATASET_DIR


@pytest.fixture(scope="session")
def output_dir() -> Path:
    return OUTPUT_DIR


@pytest.fixture(scope="session")
def datasets():
    return load_all_datasets(DATASET_DIR)


@pytest.fixture(scope="session")
def fixture_examples(datasets):
    """Every bundled example as (dataset_id, split, index, example)."""
    out = []
    for ds_id, dataset in sorted(datasets.items()):
        for split, examples in sorted(dataset.splits.items()):
            for i, example in enumerate(examples):
                out.append((ds_id, split, i, example))
    return out


def plain_table(values, properties=()):
    """Unmerged table from a 2D list of strings."""
    grid = tuple(tuple(AnchorCell(value=v) for v in row) for row in values)
    return Table(grid=grid, properties=tuple(properties))


def random_table(rng: random.Random, max_rows: int = 5, max_cols: int = 5) -> Table:
    """A structurally valid table with random merges, flags, and properties."""
    n_rows = rng.randint(1, max_rows)
    n_cols = rng.randint(1, max_cols)
    table = plain_table(
        [[f"c{r}.{c}" for c in range(n_cols)] for r in range(n_rows)],
        properties=[(f"k{i}", f"v{i}") for i in range(rng.randint(0, 3))],
    )
    # sprinkle flags
    grid = [list(row) for row in table.grid]
    for r in range(n_rows):
        for c in range(n_cols):
            grid[r][c] = AnchorCell(
                value=grid[r][c].value,
                is_heading=rng.random() < 0.25,
                is_highlighted=rng.random() < 0.25,
            )
    table = Table(grid=tuple(tuple(row) for row in grid), properties=table.properties)
    # non-overlapping merges over free 1x1 cells
    for _ in range(rng.randint(0, 3)):
        r = rng.randrange(n_rows)
        c = rng.randrange(n_cols)
        rs = rng.randint(1, min(3, n_rows - r))
        cs = rng.randint(1, min(3, n_cols - c))
        if rs * cs < 2:
            continue
        free = all(
            isinstance(table.grid[rr][cc], AnchorCell)
            and table.grid[rr][cc].row_span == 1
            and table.grid[rr][cc].col_span == 1
            for rr in range(r, r + rs)
            for cc in range(c, c + cs)
        )
        if free:
            table = merge_cells(table, Coord(r, c), rs, cs)
    return table


@st.composite
def tables(draw, max_rows: int = 5, max_cols: int = 5) -> Table:
    """Hypothesis strategy over structurally valid tables."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_table(random.Random(seed), max_rows=max_rows, max_cols=max_cols)


def anchors_of(table: Table):
    return [
        (r, c, cell)
        for r, row in enumerate(table.grid)
        for c, cell in enumerate(row)
        if isinstance(cell, AnchorCell)
    ]


def covered_of(table: Table):
    return [
        (r, c, cell)
        for r, row in enumerate(table.grid)
        for c, cell in enumerate(row)
        if isinstance(cell, CoveredCell)
    ]
