"""Interactive processing pipelines: named chains of processors that take a
table (possibly edited by the user) and produce text or a graph.

Two processors are built in: ``model_api`` prompts a generative model over
HTTP (request ``{"prompt": str}``, response ``{"text": str}``), and
``rdf_graph`` turns a triple-shaped table into a node/edge structure for
visualization. Pipeline runs never mutate stored datasets; the request may
carry a ``table_override`` with the user's edited state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import httpx

from .adapters import TRIPLE_HEADER, Dataset
from .errors import (
    InvalidTableError,
    NotFoundError,
    PipelineError,
    TemplateError,
    TypeMismatchError,
    UpstreamError,
)
from .linearize import DEFAULT_LINEARIZERS, LinearizerRegistry
from .table import Coord, Table, cell_at, validate

PROMPT_PLACEHOLDER = "{input}"
DEFAULT_TIMEOUT_MS = 10_000


@dataclass(frozen=True)
class PipelineRequest:
    dataset_id: str
    split: str
    index: int
    table_override: Table | None = None
    params: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class GraphNode:
    id: str
    label: str


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    label: str


@dataclass(frozen=True)
class Graph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("node ids must be unique")
        known = set(ids)
        for edge in self.edges:
            if edge.source not in known or edge.target not in known:
                raise ValueError(f"edge {edge} references an unknown node id")

    def to_payload(self) -> dict:
        return {
            "nodes": [{"id": n.id, "label": n.label} for n in self.nodes],
            "edges": [
                {"source": e.source, "target": e.target, "label": e.label}
                for e in self.edges
            ],
        }


@dataclass(frozen=True)
class PipelineOutput:
    kind: str
    text: str | None = None
    graph: Graph | None = None

    def __post_init__(self):
        if self.kind not in ("text", "graph"):
            raise ValueError(f"kind must be 'text' or 'graph', got {self.kind!r}")
        if self.kind == "text" and (self.text is None or self.graph is not None):
            raise ValueError("a text output must populate exactly 'text'")
        if self.kind == "graph" and (self.graph is None or self.text is not None):
            raise ValueError("a graph output must populate exactly 'graph'")

    def to_payload(self) -> dict:
        if self.kind == "text":
            return {"kind": "text", "text": self.text}
        return {"kind": "graph", "graph": self.graph.to_payload()}


# --- processors ----------------------------------------------------------------


def model_api_processor(
    table: Table,
    properties: Sequence[tuple[str, str]],
    params: Mapping[str, str],
    linearizers: LinearizerRegistry | None = None,
) -> str:
    """Fill the prompt template with the linearized table and POST it to the
    configured model endpoint."""
    template = params.get("prompt_template", PROMPT_PLACEHOLDER)
    if PROMPT_PLACEHOLDER not in template:
        raise TemplateError(
            f"prompt template must contain the placeholder {PROMPT_PLACEHOLDER!r}"
        )
    linearizer = (linearizers or DEFAULT_LINEARIZERS).get(params.get("linearizer", "default"))
    prompt = template.replace(PROMPT_PLACEHOLDER, linearizer(table))

    endpoint = params.get("endpoint")
    if not endpoint:
        raise UpstreamError("no model endpoint configured", endpoint=None)
    timeout_ms = int(params.get("timeout_ms", DEFAULT_TIMEOUT_MS))
    started = time.monotonic()
    try:
        response = httpx.post(endpoint, json={"prompt": prompt}, timeout=timeout_ms / 1000.0)
    except httpx.HTTPError as e:
        elapsed = (time.monotonic() - started) * 1000.0
        raise UpstreamError(
            f"model endpoint {endpoint} unreachable after {elapsed:.0f} ms: {e}",
            endpoint=endpoint,
            elapsed_ms=elapsed,
        ) from e
    elapsed = (time.monotonic() - started) * 1000.0
    if response.status_code != 200:
        raise UpstreamError(
            f"model endpoint {endpoint} answered HTTP {response.status_code} "
            f"after {elapsed:.0f} ms",
            endpoint=endpoint,
            elapsed_ms=elapsed,
        )
    try:
        text = response.json().get("text")
    except ValueError:
        text = None
    if not isinstance(text, str):
        raise UpstreamError(
            f"model endpoint {endpoint} returned a malformed body (expected {{\"text\": str}})",
            endpoint=endpoint,
            elapsed_ms=elapsed,
        )
    return text


def rdf_graph_processor(table: Table) -> Graph:
    """Graph structure of a triple-shaped table: deduplicated subject/object
    nodes, one edge per data row labeled by its predicate."""
    header = tuple(
        cell_at(table, Coord(0, c)).value for c in range(min(table.n_cols, 3))
    )
    if table.n_cols != 3 or table.n_rows < 2 or header != TRIPLE_HEADER:
        raise TypeMismatchError(
            "graph visualization needs a triple table "
            f"(3 columns headed {TRIPLE_HEADER}), got {table.n_rows}x{table.n_cols}"
        )
    nodes: dict[str, GraphNode] = {}
    edges = []
    for r in range(1, table.n_rows):
        s = cell_at(table, Coord(r, 0)).value
        p = cell_at(table, Coord(r, 1)).value
        o = cell_at(table, Coord(r, 2)).value
        for label in (s, o):
            nodes.setdefault(label, GraphNode(id=label, label=label))
        edges.append(GraphEdge(source=s, target=o, label=p))
    return Graph(nodes=tuple(nodes.values()), edges=tuple(edges))


ProcessorFn = Callable[[Table, Sequence[tuple[str, str]], Mapping[str, str]], "str | Graph | Table"]

PROCESSORS: dict[str, ProcessorFn] = {
    "model_api": model_api_processor,
    "rdf_graph": lambda table, properties, params: rdf_graph_processor(table),
}


# --- pipeline registry and runner ------------------------------------------------


@dataclass(frozen=True)
class PipelineSpec:
    id: str
    processors: tuple[str, ...]
    defaults: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in self.processors:
            if name not in PROCESSORS:
                raise NotFoundError(
                    f"unknown processor {name!r}; known: {sorted(PROCESSORS)}"
                )


class PipelineRegistry:
    def __init__(self):
        self._specs: dict[str, PipelineSpec] = {}

    def add(self, spec: PipelineSpec) -> PipelineSpec:
        self._specs[spec.id] = spec
        return spec

    def get(self, pipeline_id: str) -> PipelineSpec:
        try:
            return self._specs[pipeline_id]
        except KeyError:
            raise NotFoundError(
                f"unknown pipeline {pipeline_id!r}; known: {sorted(self._specs)}"
            ) from None

    def ids(self) -> list[str]:
        return sorted(self._specs)


def default_pipelines() -> PipelineRegistry:
    registry = PipelineRegistry()
    registry.add(PipelineSpec(id="model_api", processors=("model_api",)))
    registry.add(PipelineSpec(id="rdf_graph", processors=("rdf_graph",)))
    return registry


def _coerce_output(result: "str | Graph | Table | PipelineOutput") -> PipelineOutput | None:
    if isinstance(result, PipelineOutput):
        return result
    if isinstance(result, str):
        return PipelineOutput(kind="text", text=result)
    if isinstance(result, Graph):
        return PipelineOutput(kind="graph", graph=result)
    return None


def run_pipeline(
    pipeline_id: str,
    request: PipelineRequest,
    datasets: Mapping[str, Dataset],
    registry: PipelineRegistry | None = None,
) -> PipelineOutput:
    """Run a named pipeline on the request's effective table (the override
    when present, else the stored example's table)."""
    registry = registry or default_pipelines()
    spec = registry.get(pipeline_id)

    dataset = datasets.get(request.dataset_id)
    if dataset is None:
        raise NotFoundError(
            f"unknown dataset {request.dataset_id!r}; known: {sorted(datasets)}"
        )
    examples = dataset.split(request.split)
    if not (0 <= request.index < len(examples)):
        raise NotFoundError(
            f"index {request.index} out of range for {request.dataset_id}/{request.split} "
            f"(size {len(examples)})"
        )

    if request.table_override is not None:
        violations = validate(request.table_override)
        if violations:
            raise InvalidTableError(
                "table override violates invariants: "
                + "; ".join(v.message for v in violations),
                violations=violations,
            )
        current: Table = request.table_override
    else:
        current = examples[request.index].table

    params = dict(spec.defaults)
    params.update(request.params)

    output: PipelineOutput | None = None
    for name in spec.processors:
        fn = PROCESSORS[name]
        try:
            result = fn(current, current.properties, params)
        except Exception as e:
            raise PipelineError(pipeline_id, name, e) from e
        if isinstance(result, Table):
            current = result
            continue
        output = _coerce_output(result)
    if output is None:
        raise PipelineError(
            pipeline_id,
            spec.processors[-1] if spec.processors else "<empty>",
            ValueError("pipeline produced no output"),
        )
    return output
