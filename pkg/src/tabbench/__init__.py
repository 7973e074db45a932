"""tabbench: a workbench for data-to-text generation datasets.

Heterogeneous structured inputs (triple graphs, key-value pairs, tables
with highlighted cells) are parsed into one canonical table model, which
feeds linearization, exports, system-output comparison, interactive
pipelines, and a local web service.
"""

from .adapters import (
    Dataset,
    DatasetInfo,
    LoaderSpec,
    kv_to_table,
    load_dataset,
    load_dataset_info,
    merge_tables_vertically,
    register_loader,
    triples_to_table,
)
from .errors import WorkbenchError
from .linearize import (
    LinearizationConfig,
    linearize,
    make_training_pairs,
    register_linearizer,
)
from .table import (
    AnchorCell,
    Cell,
    CellView,
    Coord,
    CoveredCell,
    Table,
    TableExample,
    cell_at,
    highlighted_cells,
    merge_cells,
    set_cell_value,
    table_from_payload,
    table_to_payload,
    toggle_highlight,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AnchorCell",
    "Cell",
    "CellView",
    "Coord",
    "CoveredCell",
    "Dataset",
    "DatasetInfo",
    "LinearizationConfig",
    "LoaderSpec",
    "Table",
    "TableExample",
    "WorkbenchError",
    "cell_at",
    "highlighted_cells",
    "kv_to_table",
    "linearize",
    "load_dataset",
    "load_dataset_info",
    "make_training_pairs",
    "merge_cells",
    "merge_tables_vertically",
    "register_linearizer",
    "register_loader",
    "set_cell_value",
    "table_from_payload",
    "table_to_payload",
    "toggle_highlight",
    "triples_to_table",
    "validate",
]
