"""Command-line entry points: ``run`` (serve the workbench), ``export``
(batch-export a split), and ``sheet`` (error-analysis spreadsheet).

Exit codes: 0 success, 1 usage error, 2 runtime error. Progress and
errors go to stderr; machine-readable results (paths, counts) to stdout.
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path

import click

from .config import DEFAULT_CONFIG_NAME, ServiceConfig, load_config
from .errors import WorkbenchError
from .export import EXPORT_FORMATS, ExportRequest, export_split, make_annotation_sheet
from .outputs import parse_output_lines
from .service import serve_blocking


def _load_service_config(config_path: str | None) -> ServiceConfig:
    """Explicit --config must exist; otherwise fall back to the default
    config file when present, else built-in defaults."""
    if config_path is not None:
        return load_config(config_path)
    default = Path(DEFAULT_CONFIG_NAME)
    if default.exists():
        return load_config(default)
    return ServiceConfig()


@click.group()
def cli():
    """Workbench for data-to-text generation datasets."""


@cli.command("run")
@click.option("--port", type=int, default=None, help="Port to bind (default from config).")
@click.option("--host", type=str, default=None, help="Host to bind (default from config).")
@click.option(
    "--config",
    "config_path",
    type=click.Path(),
    default=None,
    help=f"YAML config file (default: ./{DEFAULT_CONFIG_NAME} when present).",
)
def cmd_run(port: int | None, host: str | None, config_path: str | None):
    """Launch the local web server."""
    config = _load_service_config(config_path)
    if port is not None or host is not None:
        config = ServiceConfig(
            host=host if host is not None else config.host,
            port=port if port is not None else config.port,
            dataset_dir=config.dataset_dir,
            output_dir=config.output_dir,
            session_file=config.session_file,
            pipelines=config.pipelines,
            static_dir=config.static_dir,
        )
    click.echo(f"serving on http://{config.host}:{config.port}", err=True)
    serve_blocking(config)


@cli.command("export")
@click.option("--dataset", required=True, help="Dataset id to export.")
@click.option("--split", required=True, help="Split to export.")
@click.option("--out_dir", required=True, type=click.Path(), help="Output directory.")
@click.option(
    "--export_format",
    required=True,
    type=click.Choice(EXPORT_FORMATS),
    help="Export format.",
)
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="YAML config file used to locate the dataset directory.")
def cmd_export(dataset: str, split: str, out_dir: str, export_format: str,
               config_path: str | None):
    """Batch-export one dataset split, one file per example."""
    config = _load_service_config(config_path)
    request = ExportRequest(
        dataset_id=dataset, split=split, format=export_format, out_dir=Path(out_dir)
    )
    manifest = export_split(request, dataset_dir=config.dataset_dir)
    click.echo(f"exported {len(manifest)} files to {out_dir}", err=True)
    click.echo(str(len(manifest)))


@cli.command("sheet")
@click.option("--dataset", required=True, help="Dataset id.")
@click.option("--split", required=True, help="Split to sample from.")
@click.option("--in_file", "in_files", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="System outputs JSONL (repeatable; one column per file).")
@click.option("--out_file", required=True, type=click.Path(), help="Workbook to write.")
@click.option("--count", type=int, default=50, show_default=True,
              help="Number of random examples to sample.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Sampling seed (same seed, same sheet).")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="YAML config file used to locate the dataset directory.")
def cmd_sheet(dataset: str, split: str, in_files: tuple[str, ...], out_file: str,
              count: int, seed: int, config_path: str | None):
    """Generate an error-analysis spreadsheet from sampled examples."""
    from .adapters import load_dataset

    config = _load_service_config(config_path)
    ds = load_dataset(dataset, split=split, dataset_dir=config.dataset_dir)
    size = len(ds.split(split))
    system_outputs = []
    for in_file in in_files:
        system_id = Path(in_file).stem
        with open(in_file, encoding="utf-8") as f:
            outputs, warnings = parse_output_lines(f, system_id, dataset, split, size, in_file)
        for message in warnings:
            click.echo(f"warning: {message}", err=True)
        system_outputs.append((system_id, outputs))
    path = make_annotation_sheet(ds, split, system_outputs, count=count, seed=seed,
                                 out_file=Path(out_file))
    click.echo(str(path))


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit codes."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except KeyboardInterrupt:
        return 0
    except WorkbenchError as e:
        click.echo(f"error: {e}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
