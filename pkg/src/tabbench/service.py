"""HTTP service exposing datasets, outputs, pipelines, exports, and session
state as a JSON API (plus optional static assets for the web UI).

All state except the session is loaded once at startup and then only read,
so request handling is safe to run concurrently. Session mutations are
serialized behind a lock and written atomically.
"""

from __future__ import annotations

import logging
import random
import socket
import threading
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass

import uvicorn
from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from .adapters import Dataset, load_all_datasets
from .config import ServiceConfig
from .errors import (
    BoundsError,
    ConflictError,
    EmptyInputError,
    EmptySelectionError,
    FormatError,
    IngestionError,
    InvalidTableError,
    NotFoundError,
    ParseError,
    PipelineError,
    ServiceError,
    TemplateError,
    TypeMismatchError,
    UpstreamError,
    WorkbenchError,
)
from .export import CONTENT_TYPES, EXPORT_FORMATS, export_example
from .outputs import OutputsStore, scan_output_dir
from .pipeline import (
    PipelineRegistry,
    PipelineRequest,
    PipelineSpec,
    run_pipeline,
)
from .session import SessionState, load_session, persist_session
from .table import table_from_payload, table_to_payload

logger = logging.getLogger(__name__)

_STATUS_BY_ERROR = (
    (NotFoundError, 404),
    (ConflictError, 409),
    (UpstreamError, 502),
    (ServiceError, 500),
    (BoundsError, 400),
    (ParseError, 400),
    (FormatError, 400),
    (TemplateError, 400),
    (TypeMismatchError, 400),
    (EmptySelectionError, 400),
    (EmptyInputError, 400),
    (InvalidTableError, 400),
    (IngestionError, 400),
)

_ERROR_LABELS = {
    NotFoundError: "not_found",
    ConflictError: "conflict",
    UpstreamError: "upstream",
    ServiceError: "service",
    BoundsError: "bounds",
    ParseError: "parse",
    FormatError: "format",
    TemplateError: "template",
    TypeMismatchError: "type_mismatch",
    EmptySelectionError: "empty_selection",
    EmptyInputError: "empty_input",
    InvalidTableError: "invalid_table",
    IngestionError: "ingestion",
    PipelineError: "pipeline",
}


def _error_status(exc: WorkbenchError) -> int:
    if isinstance(exc, PipelineError):
        cause = exc.cause
        if isinstance(cause, UpstreamError):
            return 502
        if isinstance(cause, WorkbenchError):
            return _error_status(cause)
        return 500
    for cls, status in _STATUS_BY_ERROR:
        if isinstance(exc, cls):
            return status
    return 400


def _error_body(exc: WorkbenchError) -> dict:
    label = _ERROR_LABELS.get(type(exc))
    if label is None:
        for cls, name in _ERROR_LABELS.items():
            if isinstance(exc, cls):
                label = name
                break
    return {"error": label or "workbench", "detail": str(exc)}


class NoteBody(BaseModel):
    text: str


class PipelineRequestBody(BaseModel):
    dataset_id: str
    split: str
    index: int
    table_override: dict | None = None
    params: dict[str, str] = {}


@dataclass
class Workspace:
    """Everything the request handlers read: immutable after startup except
    the session, which is guarded by the lock."""

    config: ServiceConfig
    datasets: dict[str, Dataset]
    outputs: OutputsStore
    pipelines: PipelineRegistry
    session: SessionState
    session_lock: threading.Lock
    rng: random.Random


def load_workspace(config: ServiceConfig, rng: random.Random | None = None) -> Workspace:
    """Load datasets, outputs, and session per the config; raises on any
    dataset ingestion failure so a broken workspace never serves."""
    datasets = load_all_datasets(config.dataset_dir)
    if config.output_dir is not None and config.output_dir.is_dir():
        outputs = scan_output_dir(config.output_dir, datasets)
    else:
        if config.output_dir is not None:
            logger.warning("output directory %s does not exist; no system outputs loaded",
                           config.output_dir)
        outputs = OutputsStore()
    pipelines = PipelineRegistry()
    for entry in config.pipelines:
        pipelines.add(PipelineSpec(id=entry.id, processors=entry.processors,
                                   defaults=dict(entry.params)))
    session = load_session(config.session_file)
    logger.info(
        "workspace ready: datasets=%s systems=%s pipelines=%s",
        sorted(datasets),
        outputs.systems(),
        pipelines.ids(),
    )
    return Workspace(
        config=config,
        datasets=datasets,
        outputs=outputs,
        pipelines=pipelines,
        session=session,
        session_lock=threading.Lock(),
        rng=rng or random.Random(),
    )


def _info_payload(dataset: Dataset) -> dict:
    info = dataset.info
    return {
        "id": info.id,
        "name": info.name,
        "description": info.description,
        "homepage": info.homepage,
        "license": info.license,
        "version": info.version,
        "data_type": info.data_type,
        "split_sizes": dict(info.split_sizes),
        "loaded_splits": {name: len(examples) for name, examples in dataset.splits.items()},
    }


def create_app(config: ServiceConfig, rng: random.Random | None = None) -> FastAPI:
    ws = load_workspace(config, rng=rng)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        with ws.session_lock:
            persist_session(ws.session, ws.config.session_file)

    app = FastAPI(title="tabbench", docs_url=None, redoc_url=None, lifespan=lifespan)
    app.state.workspace = ws

    @app.exception_handler(WorkbenchError)
    async def workbench_error_handler(request: Request, exc: WorkbenchError):
        return JSONResponse(status_code=_error_status(exc), content=_error_body(exc))

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error": "http_error", "detail": str(exc.detail)},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"error": "validation", "detail": str(exc.errors())},
        )

    def resolve_example(dataset_id: str, split: str, index: int):
        dataset = ws.datasets.get(dataset_id)
        if dataset is None:
            raise NotFoundError(f"unknown dataset {dataset_id!r}; known: {sorted(ws.datasets)}")
        examples = dataset.split(split)
        if not (0 <= index < len(examples)):
            raise NotFoundError(
                f"index {index} out of range for {dataset_id}/{split} (size {len(examples)})"
            )
        return dataset, examples[index]

    def triple_is_valid(dataset_id: str, split: str, index: int) -> bool:
        dataset = ws.datasets.get(dataset_id)
        return (
            dataset is not None
            and split in dataset.splits
            and 0 <= index < len(dataset.splits[split])
        )

    def session_payload() -> dict:
        # Dangling entries (e.g. after a dataset shrank) stay in the file but
        # are filtered out of every read.
        visible = SessionState(
            notes={k: v for k, v in ws.session.notes.items() if triple_is_valid(*k)},
            favorites={k for k in ws.session.favorites if triple_is_valid(*k)},
        )
        return visible.to_payload()

    @app.get("/api/datasets")
    def list_datasets():
        return [_info_payload(ws.datasets[ds_id]) for ds_id in sorted(ws.datasets)]

    @app.get("/api/pipelines")
    def list_pipelines():
        return {"pipelines": ws.pipelines.ids()}

    @app.get("/api/dataset/{dataset_id}/{split}/random")
    def random_example(dataset_id: str, split: str):
        dataset = ws.datasets.get(dataset_id)
        if dataset is None:
            raise NotFoundError(f"unknown dataset {dataset_id!r}; known: {sorted(ws.datasets)}")
        examples = dataset.split(split)
        index = ws.rng.randrange(len(examples))
        return {"index": index, "location": f"/api/dataset/{dataset_id}/{split}/{index}"}

    @app.get("/api/dataset/{dataset_id}/{split}/{index}")
    def get_example(dataset_id: str, split: str, index: int):
        _, example = resolve_example(dataset_id, split, index)
        key = (dataset_id, split, index)
        return {
            "dataset_id": dataset_id,
            "split": split,
            "index": index,
            "table": table_to_payload(example.table),
            "properties": [[k, v] for k, v in example.table.properties],
            "references": list(example.references),
            "outputs": [
                {"system_id": system_id, "text": text}
                for system_id, text in ws.outputs.outputs_for(dataset_id, split, index)
            ],
            "note": ws.session.notes.get(key, ""),
            "favorite": key in ws.session.favorites,
        }

    @app.post("/api/pipeline/{pipeline_id}")
    def post_pipeline(pipeline_id: str, body: PipelineRequestBody):
        override = None
        if body.table_override is not None:
            override = table_from_payload(body.table_override)
        request = PipelineRequest(
            dataset_id=body.dataset_id,
            split=body.split,
            index=body.index,
            table_override=override,
            params=body.params,
        )
        output = run_pipeline(pipeline_id, request, ws.datasets, registry=ws.pipelines)
        return output.to_payload()

    @app.get("/api/export/{dataset_id}/{split}/{index}")
    def get_export(
        dataset_id: str, split: str, index: int, format: str = "json", properties: bool = True
    ):
        if format not in EXPORT_FORMATS:
            raise FormatError(
                f"unknown export format {format!r}; supported: {', '.join(EXPORT_FORMATS)}"
            )
        _, example = resolve_example(dataset_id, split, index)
        data = export_example(example, format, include_properties=properties)
        filename = f"{dataset_id}-{split}-{index}.{format}"
        return Response(
            content=data,
            media_type=CONTENT_TYPES[format],
            headers={"Content-Disposition": f'attachment; filename="{filename}"'},
        )

    def flush_session() -> None:
        persist_session(ws.session, ws.config.session_file)

    @app.put("/api/note/{dataset_id}/{split}/{index}", status_code=204)
    def put_note(dataset_id: str, split: str, index: int, body: NoteBody):
        resolve_example(dataset_id, split, index)
        with ws.session_lock:
            key = (dataset_id, split, index)
            if body.text:
                ws.session.notes[key] = body.text
            else:
                ws.session.notes.pop(key, None)
            flush_session()
        return Response(status_code=204)

    @app.put("/api/favorite/{dataset_id}/{split}/{index}", status_code=204)
    def put_favorite(dataset_id: str, split: str, index: int):
        resolve_example(dataset_id, split, index)
        with ws.session_lock:
            ws.session.favorites.add((dataset_id, split, index))
            flush_session()
        return Response(status_code=204)

    @app.delete("/api/favorite/{dataset_id}/{split}/{index}", status_code=204)
    def delete_favorite(dataset_id: str, split: str, index: int):
        resolve_example(dataset_id, split, index)
        with ws.session_lock:
            ws.session.favorites.discard((dataset_id, split, index))
            flush_session()
        return Response(status_code=204)

    @app.get("/api/session")
    def get_session():
        with ws.session_lock:
            return session_payload()

    if config.static_dir is not None and config.static_dir.is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="static")
    else:
        if config.static_dir is not None:
            logger.warning("static directory %s does not exist; serving API only",
                           config.static_dir)

        @app.get("/")
        def index():
            return {
                "service": "tabbench",
                "datasets": sorted(ws.datasets),
                "pipelines": ws.pipelines.ids(),
                "api": "/api/datasets",
            }

    return app


def _bind(host: str, port: int) -> socket.socket:
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        sock.bind((host, port))
    except OSError as e:
        sock.close()
        raise ServiceError(f"cannot bind {host}:{port}: {e}") from e
    return sock


@dataclass
class ServerHandle:
    server: uvicorn.Server
    thread: threading.Thread
    host: str
    port: int
    app: FastAPI

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def stop(self) -> None:
        self.server.should_exit = True
        self.thread.join(timeout=10)


def serve(
    config: ServiceConfig, rng: random.Random | None = None, wait_s: float = 10.0
) -> ServerHandle:
    """Start the service on a background thread; returns once it accepts
    connections. Raises :class:`ServiceError` if the port is taken or the
    workspace fails to load."""
    app = create_app(config, rng=rng)
    sock = _bind(config.host, config.port)
    port = sock.getsockname()[1]
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    thread = threading.Thread(
        target=server.run, kwargs={"sockets": [sock]}, daemon=True, name="tabbench-service"
    )
    thread.start()
    deadline = time.monotonic() + wait_s
    while not server.started:
        if not thread.is_alive():
            raise ServiceError("service thread exited during startup")
        if time.monotonic() > deadline:
            raise ServiceError(f"service did not start within {wait_s} s")
        time.sleep(0.01)
    logger.info("serving on http://%s:%s", config.host, port)
    return ServerHandle(server=server, thread=thread, host=config.host, port=port, app=app)


def serve_blocking(config: ServiceConfig) -> None:
    """Run the service in the foreground until interrupted (CLI `run`)."""
    app = create_app(config)
    sock = _bind(config.host, config.port)
    server = uvicorn.Server(uvicorn.Config(app, log_level="info"))
    try:
        server.run(sockets=[sock])
    except KeyboardInterrupt:
        # uvicorn re-raises the captured SIGINT once graceful shutdown (and
        # the session flush) has finished; that is a clean exit here.
        pass
