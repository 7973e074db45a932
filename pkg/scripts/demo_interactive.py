#!/usr/bin/env python3
"""Desk-scale demo of the interactive loop.

Starts the echo mock model and the service on the bundled fixtures, fetches
a key-value example, edits one cell, reruns the model pipeline, and shows
that the stored example stays untouched. Also renders one RDF graph.
"""

from __future__ import annotations

import random
import sys
import tempfile
from pathlib import Path

import httpx

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from tabbench.config import PipelineConfig, ServiceConfig  # noqa: E402
from tabbench.mock_model import MockModelServer  # noqa: E402
from tabbench.service import serve  # noqa: E402


def main() -> int:
    fixtures = ROOT / "fixtures"
    with MockModelServer() as mock, tempfile.TemporaryDirectory() as tmp:
        config = ServiceConfig(
            host="127.0.0.1",
            port=18890,
            dataset_dir=fixtures / "datasets",
            output_dir=fixtures / "outputs",
            session_file=Path(tmp) / "session.json",
            pipelines=(
                PipelineConfig(
                    id="model_api",
                    processors=("model_api",),
                    params={
                        "prompt_template": "Describe the following data: {input}",
                        "endpoint": mock.url,
                    },
                ),
                PipelineConfig(id="rdf_graph", processors=("rdf_graph",)),
            ),
        )
        handle = serve(config, rng=random.Random())
        try:
            with httpx.Client(base_url=handle.url, timeout=10) as client:
                example = client.get("/api/dataset/e2e_mini/dev/0").json()
                print("fetched e2e_mini/dev/0")
                print("  references:", example["references"][0])
                print("  systems:", [o["system_id"] for o in example["outputs"]])

                table = example["table"]
                print("  cell (0,1):", table["cells"][0][1]["value"])
                table["cells"][0][1]["value"] = "the National Theatre"
                rerun = client.post(
                    "/api/pipeline/model_api",
                    json={
                        "dataset_id": "e2e_mini",
                        "split": "dev",
                        "index": 0,
                        "table_override": table,
                    },
                ).json()
                print("model output after the edit:")
                print(" ", rerun["text"])

                again = client.get("/api/dataset/e2e_mini/dev/0").json()
                print("stored cell (0,1) still:", again["table"]["cells"][0][1]["value"])

                graph = client.post(
                    "/api/pipeline/rdf_graph",
                    json={"dataset_id": "webnlg_mini", "split": "dev", "index": 0},
                ).json()["graph"]
                print("rdf graph of webnlg_mini/dev/0:")
                for edge in graph["edges"]:
                    print(f"  {edge['source']} --{edge['label']}--> {edge['target']}")
        finally:
            handle.stop()
    return 0


if __name__ == "__main__":
    sys.exit(main())
