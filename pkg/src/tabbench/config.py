"""Service configuration, read from a YAML file whose keys mirror the
ServiceConfig field names. Relative paths are resolved against the config
file's directory."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ServiceError

DEFAULT_CONFIG_NAME = "tabbench.yaml"


@dataclass(frozen=True)
class PipelineConfig:
    id: str
    processors: tuple[str, ...]
    params: dict[str, str] = field(default_factory=dict)


def default_pipeline_configs() -> tuple[PipelineConfig, ...]:
    return (
        PipelineConfig(id="model_api", processors=("model_api",), params={}),
        PipelineConfig(id="rdf_graph", processors=("rdf_graph",), params={}),
    )


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8890
    dataset_dir: Path = Path("datasets")
    output_dir: Path | None = Path("outputs")
    session_file: Path = Path("session.json")
    pipelines: tuple[PipelineConfig, ...] = field(default_factory=default_pipeline_configs)
    static_dir: Path | None = None

    def __post_init__(self):
        if not (1 <= self.port <= 65535):
            raise ServiceError(f"port must be in [1, 65535], got {self.port}")


def _resolve(base: Path, value) -> Path:
    path = Path(value)
    return path if path.is_absolute() else base / path


def load_config(path: Path | str) -> ServiceConfig:
    """Parse a YAML config file into a ServiceConfig."""
    path = Path(path)
    if not path.exists():
        raise ServiceError(f"config file {path} does not exist")
    try:
        raw = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as e:
        raise ServiceError(f"config file {path} is not valid YAML: {e}") from e
    if not isinstance(raw, dict):
        raise ServiceError(f"config file {path} must hold a mapping at the top level")

    base = path.parent
    known = {"host", "port", "dataset_dir", "output_dir", "session_file", "pipelines", "static_dir"}
    unknown = set(raw) - known
    if unknown:
        raise ServiceError(f"config file {path}: unknown keys {sorted(unknown)}")

    pipelines: tuple[PipelineConfig, ...]
    if "pipelines" in raw:
        entries = raw["pipelines"] or []
        if not isinstance(entries, list):
            raise ServiceError(f"config file {path}: 'pipelines' must be a list")
        parsed = []
        for entry in entries:
            if not isinstance(entry, dict) or "id" not in entry:
                raise ServiceError(f"config file {path}: each pipeline needs an 'id'")
            processors = entry.get("processors", [entry["id"]])
            params = {str(k): str(v) for k, v in (entry.get("params") or {}).items()}
            parsed.append(
                PipelineConfig(
                    id=str(entry["id"]),
                    processors=tuple(str(p) for p in processors),
                    params=params,
                )
            )
        pipelines = tuple(parsed)
    else:
        pipelines = default_pipeline_configs()

    return ServiceConfig(
        host=str(raw.get("host", "127.0.0.1")),
        port=int(raw.get("port", 8890)),
        dataset_dir=_resolve(base, raw.get("dataset_dir", "datasets")),
        output_dir=_resolve(base, raw["output_dir"]) if raw.get("output_dir") else None,
        session_file=_resolve(base, raw.get("session_file", "session.json")),
        pipelines=pipelines,
        static_dir=_resolve(base, raw["static_dir"]) if raw.get("static_dir") else None,
    )
