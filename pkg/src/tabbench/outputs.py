"""Pre-generated system outputs, loaded from JSONL files and aligned with
dataset examples for side-by-side comparison.

Files are named ``{dataset_id}-{split}-{system_id}.jsonl``; each line is an
object with at least ``{"out": str}``. Line k aligns with example k unless
the object carries an explicit ``"index"`` field, which wins. Problems
(malformed lines, out-of-bounds indices, duplicate indices) are collected
as warnings, never raised.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .adapters import Dataset
from .errors import WorkbenchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratedOutput:
    system_id: str
    dataset_id: str
    split: str
    index: int
    text: str


@dataclass
class OutputsStore:
    # (dataset_id, split) -> system_id -> index -> text
    _outputs: dict[tuple[str, str], dict[str, dict[int, str]]] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def add(self, output: GeneratedOutput) -> bool:
        """Insert one output; returns False (and records a warning) when it
        replaces an earlier line for the same (system, index)."""
        systems = self._outputs.setdefault((output.dataset_id, output.split), {})
        per_index = systems.setdefault(output.system_id, {})
        fresh = output.index not in per_index
        per_index[output.index] = output.text
        return fresh

    def outputs_for(self, dataset_id: str, split: str, index: int) -> list[tuple[str, str]]:
        """All (system_id, text) pairs for one example, sorted by system id."""
        systems = self._outputs.get((dataset_id, split), {})
        return sorted(
            (system_id, per_index[index])
            for system_id, per_index in systems.items()
            if index in per_index
        )

    def systems(self) -> list[str]:
        ids = {s for systems in self._outputs.values() for s in systems}
        return sorted(ids)

    def warn(self, message: str) -> None:
        self.warnings.append(message)
        logger.warning(message)


def parse_output_lines(
    lines, system_id: str, dataset_id: str, split: str, split_size: int | None, source: str
) -> tuple[dict[int, str], list[str]]:
    """Parse JSONL output lines into index -> text with positional/explicit
    alignment; returns the mapping plus warnings."""
    outputs: dict[int, str] = {}
    warnings: list[str] = []
    position = -1
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        position += 1  # physical position among non-blank lines
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            warnings.append(f"{source}:{lineno}: skipped malformed JSON ({e.msg})")
            continue
        if not isinstance(obj, dict) or not isinstance(obj.get("out"), str):
            warnings.append(f"{source}:{lineno}: skipped line without a string 'out' field")
            continue
        index = obj.get("index", position)
        if not isinstance(index, int) or index < 0:
            warnings.append(f"{source}:{lineno}: skipped non-integer index {index!r}")
            continue
        if split_size is not None and index >= split_size:
            warnings.append(
                f"{source}:{lineno}: index {index} out of bounds for "
                f"{dataset_id}/{split} (size {split_size})"
            )
            continue
        if index in outputs:
            warnings.append(
                f"{source}:{lineno}: duplicate output for {system_id} index {index}; "
                "last line wins"
            )
        outputs[index] = obj["out"]
    return outputs, warnings


def _split_size(dataset: Dataset, split: str) -> int | None:
    if split in dataset.splits:
        return len(dataset.splits[split])
    return dataset.info.split_sizes.get(split)


def _match_filename(
    name: str, datasets: Mapping[str, Dataset]
) -> tuple[str, str, str] | None:
    """Match ``{dataset_id}-{split}-{system_id}`` against known dataset ids
    (longest id first, since ids may themselves contain hyphens)."""
    for dataset_id in sorted(datasets, key=len, reverse=True):
        prefix = f"{dataset_id}-"
        if not name.startswith(prefix):
            continue
        rest = name[len(prefix):]
        split, sep, system_id = rest.partition("-")
        if not sep or not split or not system_id:
            return None
        return dataset_id, split, system_id
    return None


def scan_output_dir(directory: Path | str, datasets: Mapping[str, Dataset]) -> OutputsStore:
    """Build a store from every matching ``*.jsonl`` file in ``directory``."""
    root = Path(directory)
    if not root.is_dir():
        raise WorkbenchError(f"output directory {root} does not exist")
    store = OutputsStore()
    for path in sorted(root.glob("*.jsonl")):
        matched = _match_filename(path.stem, datasets)
        if matched is None:
            store.warn(f"{path.name}: does not match {{dataset}}-{{split}}-{{system}}.jsonl; skipped")
            continue
        dataset_id, split, system_id = matched
        dataset = datasets[dataset_id]
        size = _split_size(dataset, split)
        if size is None:
            store.warn(f"{path.name}: unknown split {split!r} for dataset {dataset_id!r}; skipped")
            continue
        with path.open(encoding="utf-8") as f:
            outputs, warnings = parse_output_lines(
                f, system_id, dataset_id, split, size, path.name
            )
        for message in warnings:
            store.warn(message)
        for index, text in outputs.items():
            store.add(
                GeneratedOutput(
                    system_id=system_id,
                    dataset_id=dataset_id,
                    split=split,
                    index=index,
                    text=text,
                )
            )
    return store


def outputs_for(
    store: OutputsStore, dataset_id: str, split: str, index: int
) -> list[tuple[str, str]]:
    return store.outputs_for(dataset_id, split, index)
