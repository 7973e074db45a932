"""Per-user session state: notes and favorites keyed by
(dataset_id, split, index), persisted as one JSON file.

Writes are atomic (temp file + rename) so a reader never observes a
half-written file. A missing file loads as an empty session; a corrupt
file is logged and also falls back to empty.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

ExampleKey = tuple[str, str, int]


@dataclass
class SessionState:
    notes: dict[ExampleKey, str] = field(default_factory=dict)
    favorites: set[ExampleKey] = field(default_factory=set)

    def to_payload(self) -> dict:
        return {
            "notes": {_format_key(k): text for k, text in sorted(self.notes.items())},
            "favorites": sorted(_format_key(k) for k in self.favorites),
        }


def _format_key(key: ExampleKey) -> str:
    dataset_id, split, index = key
    return f"{dataset_id}/{split}/{index}"


def _parse_key(text: str) -> ExampleKey:
    dataset_id, split, index = text.rsplit("/", 2)
    return (dataset_id, split, int(index))


def persist_session(state: SessionState, path: Path | str) -> None:
    """Atomically write the session file (write temp, then rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = json.dumps(state.to_payload(), ensure_ascii=False, indent=2)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def load_session(path: Path | str) -> SessionState:
    """Load a session file; missing or corrupt files yield an empty session
    (corruption is flagged in the logs)."""
    path = Path(path)
    if not path.exists():
        return SessionState()
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
        notes = {_parse_key(k): str(v) for k, v in raw.get("notes", {}).items()}
        favorites = {_parse_key(k) for k in raw.get("favorites", [])}
    except (ValueError, AttributeError, TypeError) as e:
        logger.error("session file %s is corrupt (%s); starting with an empty session", path, e)
        return SessionState()
    return SessionState(notes=notes, favorites=favorites)
