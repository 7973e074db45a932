"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
and enforcing its runtime budget. Run with `pytest tests/test_acceptance.py -v -s`."""

import asyncio
import json
import random
import signal
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import httpx
import pytest

from tabbench.adapters import (
    kv_to_table,
    load_all_datasets,
    table_to_pairs,
    table_to_triples,
    triples_to_table,
)
from tabbench.config import PipelineConfig, ServiceConfig
from tabbench.errors import BoundsError, CoverageError, MergeConflictError
from tabbench.export import export_example, make_annotation_sheet, parse_json_export
from tabbench.linearize import linearize
from tabbench.mock_model import MockModelServer
from tabbench.outputs import scan_output_dir
from tabbench.service import create_app, serve
from tabbench.table import (
    AnchorCell,
    Coord,
    cell_at,
    merge_cells,
    set_cell_value,
    toggle_highlight,
    validate,
)

from conftest import DATASET_DIR, OUTPUT_DIR, random_table
from test_export import TableHTMLParser, read_xlsx
from test_service import free_port


@contextmanager
def criterion(number: int, title: str, budget_s: float):
    started = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"FAIL criterion {number}: {title}")
        raise
    elapsed = time.monotonic() - started
    print(f"PASS criterion {number}: {title} ({elapsed:.2f}s < {budget_s}s)")
    assert elapsed < budget_s, f"criterion {number} exceeded its {budget_s}s budget"


def service_config(tmp_path, mock_url=None, port=8890) -> ServiceConfig:
    params = {}
    if mock_url:
        params["endpoint"] = mock_url
    return ServiceConfig(
        host="127.0.0.1",
        port=port,
        dataset_dir=DATASET_DIR,
        output_dir=OUTPUT_DIR,
        session_file=tmp_path / "session.json",
        pipelines=(
            PipelineConfig(id="model_api", processors=("model_api",), params=params),
            PipelineConfig(id="rdf_graph", processors=("rdf_graph",), params={}),
        ),
    )


def test_criterion_1_adapter_shape_laws():
    with criterion(1, "adapter shape laws with inverse recovery", 5.0):
        rng = random.Random(101)
        for _ in range(200):
            k = rng.randint(1, 12)
            triples = [
                (f"s{rng.randrange(40)}", f"p{rng.randrange(15)}", f"o{rng.randrange(40)}")
                for _ in range(k)
            ]
            t = triples_to_table(triples)
            assert (t.n_rows, t.n_cols) == (k + 1, 3)
            header = tuple(cell_at(t, Coord(0, c)).value for c in range(3))
            assert header == ("subject", "predicate", "object")
            assert all(cell_at(t, Coord(0, c)).is_heading for c in range(3))
            assert table_to_triples(t) == triples
        for _ in range(200):
            k = rng.randint(1, 12)
            pairs = [(f"key {rng.randrange(40)}", f"value {rng.randrange(40)}") for _ in range(k)]
            t = kv_to_table(pairs)
            assert (t.n_rows, t.n_cols) == (k, 2)
            assert all(cell_at(t, Coord(r, 0)).is_heading for r in range(k))
            assert not any(cell_at(t, Coord(r, 1)).is_heading for r in range(k))
            assert table_to_pairs(t) == pairs


def test_criterion_2_grid_invariants():
    with criterion(2, "grid invariants under random operation sequences", 10.0):
        rng = random.Random(202)
        datasets = load_all_datasets(DATASET_DIR)
        fixture_tables = [
            example.table
            for dataset in datasets.values()
            for examples in dataset.splits.values()
            for example in examples
        ]
        assert fixture_tables
        for seq in range(1000):
            table = fixture_tables[seq % len(fixture_tables)]
            for _ in range(rng.randint(1, 6)):
                at = Coord(rng.randrange(table.n_rows), rng.randrange(table.n_cols))
                op = rng.randrange(4)
                if op == 0:
                    table = set_cell_value(table, at, f"edit{seq}")
                elif op == 1:
                    flipped = toggle_highlight(table, at)
                    assert toggle_highlight(flipped, at) == table  # involution
                    table = flipped
                else:
                    rs, cs = rng.randint(1, 2), rng.randint(1, 2)
                    try:
                        merged = merge_cells(table, at, rs, cs)
                    except (MergeConflictError, BoundsError):
                        continue
                    anchor_value = cell_at(merged, at).value
                    for rr in range(at.row, at.row + rs):
                        for cc in range(at.col, at.col + cs):
                            assert cell_at(merged, Coord(rr, cc)).value == anchor_value
                    table = merged
                assert validate(table) == []


def test_criterion_3_export_round_trip():
    with criterion(3, "export round trip and format property rules", 10.0):
        datasets = load_all_datasets(DATASET_DIR)
        examples = [
            (ds_id, split, i, example)
            for ds_id, dataset in sorted(datasets.items())
            for split, split_examples in sorted(dataset.splits.items())
            for i, example in enumerate(split_examples)
        ]
        assert len(examples) >= 20
        assert {datasets[e[0]].info.data_type for e in examples} == {
            "key_value", "graph", "table", "table_highlighted",
        }
        for ds_id, split, i, example in examples:
            where = f"{ds_id}/{split}/{i}"
            assert parse_json_export(export_example(example, "json")) == example, where

            keys = [k for k, _ in example.table.properties]
            csv_text = export_example(example, "csv").decode("utf-8")
            for key in keys:
                assert key not in csv_text, where
            json_text = export_example(example, "json", True).decode("utf-8")
            txt_text = export_example(example, "txt", True).decode("utf-8")
            html_text = export_example(example, "html", True).decode("utf-8")
            (_, xlsx_cells, _, _), = read_xlsx(export_example(example, "xlsx", True))
            xlsx_values = set(xlsx_cells.values())
            for key in keys:
                assert key in json_text and key in txt_text and key in html_text, where
                assert key in xlsx_values, where

            parser = TableHTMLParser()
            parser.feed(html_text)
            span_sum = sum(rs * cs for _, rs, cs, _ in parser.cells)
            assert span_sum == example.table.n_rows * example.table.n_cols, where


def test_criterion_4_linearization_determinism():
    with criterion(4, "linearization determinism and marker-count law", 5.0):
        datasets = load_all_datasets(DATASET_DIR)
        tables = [
            example.table
            for dataset in datasets.values()
            for examples in dataset.splits.values()
            for example in examples
        ]
        rng = random.Random(404)
        tables += [random_table(rng) for _ in range(500)]
        for table in tables:
            first = linearize(table)
            assert linearize(table) == first  # byte-identical repetition
            rendered_anchors = sum(
                1 for row in table.grid for cell in row if isinstance(cell, AnchorCell)
            )
            assert first.count("[C]") + first.count("[H]") == rendered_anchors


def test_criterion_5_annotation_sheet(tmp_path):
    with criterion(5, "annotation sheet sampling and coverage", 5.0):
        datasets = load_all_datasets(DATASET_DIR)
        dataset = datasets["e2e_mini"]
        full = ("t5base", {i: f"output {i}" for i in range(5)})

        def index_column(path: Path):
            (_, cells, _, _), = read_xlsx(path.read_bytes())
            rows = sorted(r for (r, c) in cells if c == 0 and r > 0)
            return [cells[(r, 0)] for r in rows]

        a = make_annotation_sheet(dataset, "dev", [full], 50, 7, tmp_path / "a.xlsx")
        b = make_annotation_sheet(dataset, "dev", [full], 50, 7, tmp_path / "b.xlsx")
        assert index_column(a) == index_column(b)
        assert len(index_column(a)) == 5  # min(count, split size)
        assert len(set(index_column(a))) == 5  # distinct
        small = make_annotation_sheet(dataset, "dev", [full], 3, 7, tmp_path / "c.xlsx")
        assert len(index_column(small)) == 3

        with pytest.raises(CoverageError) as err:
            make_annotation_sheet(
                dataset, "dev", [("gappy", {0: "only"})], 5, 7, tmp_path / "d.xlsx"
            )
        assert err.value.system_id == "gappy" and err.value.index in {1, 2, 3, 4}


def test_criterion_6_outputs_store(tmp_path):
    with criterion(6, "outputs store alignment and duplicate policy", 2.0):
        datasets = load_all_datasets(DATASET_DIR)
        store = scan_output_dir(OUTPUT_DIR, datasets)
        for i in range(5):
            entry = dict(store.outputs_for("e2e_mini", "dev", i))
            assert "t5base" in entry  # positional fixture
        assert dict(store.outputs_for("e2e_mini", "dev", 3))["gpt2"] == (
            "Blue Spice has a five star rating and high prices."
        )  # explicit-index fixture
        assert dict(store.outputs_for("e2e_mini", "dev", 2)).keys() == {"t5base"}

        messy = tmp_path / "messy"
        messy.mkdir()
        (messy / "e2e_mini-dev-sys.jsonl").write_text(
            json.dumps({"index": 0, "out": "first"}) + "\n"
            + json.dumps({"index": 0, "out": "second"}) + "\n"
            + json.dumps({"index": 77, "out": "beyond"}) + "\n",
            encoding="utf-8",
        )
        messy_store = scan_output_dir(messy, datasets)
        assert messy_store.outputs_for("e2e_mini", "dev", 0) == [("sys", "second")]
        assert any("duplicate" in w for w in messy_store.warnings)
        assert any("out of bounds" in w for w in messy_store.warnings)
        assert all(
            idx < 5
            for (ds, split), systems in messy_store._outputs.items()
            for per_index in systems.values()
            for idx in per_index
        )


def test_criterion_7_interactive_scenario(tmp_path):
    with criterion(7, "end-to-end interactive edit-and-rerun scenario", 10.0):
        with MockModelServer() as mock:
            config = service_config(tmp_path, mock.url, port=free_port())
            handle = serve(config)
            try:
                base = handle.url
                with httpx.Client(base_url=base, timeout=10) as client:
                    fetched = client.get("/api/dataset/e2e_mini/dev/0").json()
                    table = fetched["table"]
                    assert table["cells"][0][1]["value"] == "Café Sicilia"
                    table["cells"][0][1]["value"] = "the National Theatre"
                    response = client.post(
                        "/api/pipeline/model_api",
                        json={
                            "dataset_id": "e2e_mini",
                            "split": "dev",
                            "index": 0,
                            "table_override": table,
                            "params": {},
                        },
                    )
                    assert response.status_code == 200
                    text = response.json()["text"]
                    assert "the National Theatre" in text
                    assert "Café Sicilia" not in text
                    again = client.get("/api/dataset/e2e_mini/dev/0").json()
                    assert again["table"]["cells"][0][1]["value"] == "Café Sicilia"
            finally:
                handle.stop()


def test_criterion_8_cli_conformance(tmp_path):
    with criterion(8, "CLI conformance for run/export/sheet", 15.0):
        config = tmp_path / "tabbench.yaml"
        config.write_text(
            f"dataset_dir: {DATASET_DIR}\n"
            f"output_dir: {OUTPUT_DIR}\n"
            f"session_file: {tmp_path / 'session.json'}\n",
            encoding="utf-8",
        )

        # run --port --host, then clean SIGINT shutdown
        port = free_port()
        process = subprocess.Popen(
            [sys.executable, "-m", "tabbench", "run", f"--port={port}", "--host=0.0.0.0"],
            cwd=tmp_path, stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True,
        )
        try:
            deadline = time.time() + 15
            while True:
                try:
                    if httpx.get(f"http://127.0.0.1:{port}/api/datasets", timeout=1).status_code == 200:
                        break
                except httpx.HTTPError:
                    time.sleep(0.2)
                assert time.time() < deadline, "server did not come up"
                assert process.poll() is None, process.communicate()[1]
            process.send_signal(signal.SIGINT)
            process.wait(timeout=10)
            assert process.returncode == 0
        finally:
            if process.poll() is None:
                process.kill()

        def run_cli(*args):
            return subprocess.run(
                [sys.executable, "-m", "tabbench", *args],
                capture_output=True, text=True, cwd=tmp_path, timeout=60,
            )

        result = run_cli(
            "export", "--dataset", "webnlg_mini", "--split", "dev",
            "--out_dir", "export/datasets/webnlg_mini", "--export_format", "xlsx",
        )
        assert result.returncode == 0, result.stderr
        assert len(list((tmp_path / "export/datasets/webnlg_mini").glob("*.xlsx"))) == 5

        outputs_file = tmp_path / "out-t5-base.jsonl"
        outputs_file.write_text(
            (OUTPUT_DIR / "webnlg_mini-dev-t5base.jsonl").read_text(encoding="utf-8"),
            encoding="utf-8",
        )
        result = run_cli(
            "sheet", "--dataset", "webnlg_mini", "--split", "dev",
            "--in_file", "out-t5-base.jsonl",
            "--out_file", "analysis_webnlg.xlsx", "--count", "50",
        )
        assert result.returncode == 0, result.stderr
        assert (tmp_path / "analysis_webnlg.xlsx").exists()

        bad = run_cli(
            "export", "--dataset", "webnlg_mini", "--split", "dev",
            "--out_dir", "x", "--export_format", "pdf",
        )
        assert bad.returncode != 0
        for fmt in ("xlsx", "html", "json", "txt", "csv"):
            assert fmt in bad.stderr


def test_criterion_9_random_endpoint_uniformity(tmp_path):
    with criterion(9, "random endpoint uniformity (chi-square)", 10.0):
        from scipy.stats import chisquare

        app = create_app(service_config(tmp_path), rng=random.Random(909))

        async def call_once() -> bytes:
            path = "/api/dataset/e2e_mini/dev/random"
            scope = {
                "type": "http", "asgi": {"version": "3.0"}, "http_version": "1.1",
                "method": "GET", "scheme": "http", "path": path,
                "raw_path": path.encode(), "query_string": b"",
                "headers": [(b"host", b"test")], "client": ("127.0.0.1", 1),
                "server": ("test", 80),
            }
            chunks = bytearray()
            statuses = []

            async def receive():
                return {"type": "http.request", "body": b"", "more_body": False}

            async def send(message):
                if message["type"] == "http.response.start":
                    statuses.append(message["status"])
                elif message["type"] == "http.response.body":
                    chunks.extend(message.get("body", b""))

            await app(scope, receive, send)
            assert statuses == [200]
            return bytes(chunks)

        async def draw_all(n: int) -> list[int]:
            results = []
            for _ in range(0, n, 500):
                batch = await asyncio.gather(*[call_once() for _ in range(500)])
                results.extend(json.loads(raw)["index"] for raw in batch)
            return results

        draws = asyncio.run(draw_all(10_000))
        assert len(draws) == 10_000
        counts = [draws.count(i) for i in range(5)]
        assert sum(counts) == 10_000  # every draw in bounds
        result = chisquare(counts)
        print(f"  chi-square counts={counts} p={result.pvalue:.4f}")
        assert result.pvalue > 0.001
