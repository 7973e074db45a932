"""Exception types shared across the workbench.

Every error raised on purpose derives from :class:`WorkbenchError` so
callers (CLI, HTTP service) can distinguish expected failures from bugs.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all expected workbench failures."""


class BoundsError(WorkbenchError):
    """A coordinate or index falls outside the table/split it addresses."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


class MergeConflictError(WorkbenchError):
    """A merge rectangle overlaps an existing multi-cell span."""


class EmptyInputError(WorkbenchError):
    """An adapter received an empty record list."""


class EmptySelectionError(WorkbenchError):
    """A highlighted-only operation was asked of a table with no highlights."""


class ParseError(WorkbenchError):
    """A source file or payload could not be parsed."""

    def __init__(self, reason: str, file: str | None = None, line: int | None = None):
        loc = ""
        if file is not None:
            loc = f"{file}: " if line is None else f"{file}:{line}: "
        super().__init__(f"{loc}{reason}")
        self.reason = reason
        self.file = file
        self.line = line


class NotFoundError(WorkbenchError):
    """A dataset, split, example, pipeline, or registry id does not exist."""


class ConflictError(WorkbenchError):
    """An id is already taken in a registry."""


class IngestionError(WorkbenchError):
    """A source record violates the table model invariants."""


class FormatError(WorkbenchError):
    """An unknown export format was requested."""


class CoverageError(WorkbenchError):
    """A system lacks an output for a sampled example index."""

    def __init__(self, system_id: str, index: int):
        super().__init__(f"system {system_id!r} has no output for example index {index}")
        self.system_id = system_id
        self.index = index


class TemplateError(WorkbenchError):
    """A prompt template is missing its required placeholder."""


class UpstreamError(WorkbenchError):
    """The model endpoint failed, timed out, or answered non-200."""

    def __init__(self, message: str, endpoint: str | None = None, elapsed_ms: float | None = None):
        super().__init__(message)
        self.endpoint = endpoint
        self.elapsed_ms = elapsed_ms


class TypeMismatchError(WorkbenchError):
    """A processor received a table of the wrong shape/data type."""


class InvalidTableError(WorkbenchError):
    """A user-supplied table failed validation."""

    def __init__(self, message: str, violations: list | None = None):
        super().__init__(message)
        self.violations = violations or []


class PipelineError(WorkbenchError):
    """A processor inside a pipeline failed; carries the processor name and cause."""

    def __init__(self, pipeline_id: str, processor: str, cause: BaseException):
        super().__init__(f"pipeline {pipeline_id!r}: processor {processor!r} failed: {cause}")
        self.pipeline_id = pipeline_id
        self.processor = processor
        self.cause = cause


class ServiceError(WorkbenchError):
    """The HTTP service could not start (bad config, bind failure, ...)."""
