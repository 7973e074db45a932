import random

import pytest

from tabbench.adapters import kv_to_table, triples_to_table
from tabbench.errors import (
    InvalidTableError,
    NotFoundError,
    PipelineError,
    TemplateError,
    TypeMismatchError,
    UpstreamError,
)
from tabbench.linearize import linearize
from tabbench.mock_model import MockModelServer
from tabbench.pipeline import (
    Graph,
    GraphEdge,
    GraphNode,
    PipelineOutput,
    PipelineRequest,
    PipelineSpec,
    default_pipelines,
    model_api_processor,
    rdf_graph_processor,
    run_pipeline,
)
from tabbench.table import AnchorCell, Coord, Table, set_cell_value

from conftest import plain_table


@pytest.fixture(scope="module")
def mock_model():
    with MockModelServer() as server:
        yield server


# --- rdf graph processor -----------------------------------------------------------


def test_shared_subject_counts():
    t = triples_to_table([("a", "p1", "b"), ("a", "p2", "c")])
    graph = rdf_graph_processor(t)
    assert len(graph.nodes) == 3
    assert len(graph.edges) == 2
    assert {e.label for e in graph.edges} == {"p1", "p2"}


def test_single_triple_and_self_loop():
    graph = rdf_graph_processor(triples_to_table([("s", "p", "o")]))
    assert len(graph.nodes) == 2 and len(graph.edges) == 1
    loop = rdf_graph_processor(triples_to_table([("s", "loves", "s")]))
    assert len(loop.nodes) == 1 and len(loop.edges) == 1
    assert loop.edges[0].source == loop.edges[0].target == "s"


def test_node_count_bound_on_random_triples():
    rng = random.Random(5)
    for _ in range(50):
        k = rng.randint(1, 10)
        triples = [
            (f"e{rng.randrange(6)}", f"p{rng.randrange(4)}", f"e{rng.randrange(6)}")
            for _ in range(k)
        ]
        graph = rdf_graph_processor(triples_to_table(triples))
        assert len(graph.nodes) <= 2 * k
        assert len(graph.edges) == k
        node_ids = {n.id for n in graph.nodes}
        assert all(e.source in node_ids and e.target in node_ids for e in graph.edges)


def test_non_triple_table_is_type_mismatch():
    with pytest.raises(TypeMismatchError):
        rdf_graph_processor(kv_to_table([("k", "v")]))
    with pytest.raises(TypeMismatchError):
        rdf_graph_processor(plain_table([["a", "b", "c"]]))  # no heading row


def test_graph_well_formedness_is_enforced():
    with pytest.raises(ValueError):
        Graph(nodes=(GraphNode("a", "a"),), edges=(GraphEdge("a", "missing", "p"),))
    with pytest.raises(ValueError):
        Graph(nodes=(GraphNode("a", "a"), GraphNode("a", "a")), edges=())


def test_pipeline_output_exactly_one_kind():
    with pytest.raises(ValueError):
        PipelineOutput(kind="text")
    with pytest.raises(ValueError):
        PipelineOutput(kind="graph", text="x")
    out = PipelineOutput(kind="text", text="x")
    assert out.to_payload() == {"kind": "text", "text": "x"}


# --- model api processor -----------------------------------------------------------


def test_model_api_echo_contains_linearization(mock_model):
    t = kv_to_table([("name", "Aromi")])
    text = model_api_processor(
        t, t.properties,
        {"prompt_template": "Describe: {input}", "endpoint": mock_model.url},
    )
    assert text == f"Describe: {linearize(t)}"


def test_model_api_missing_placeholder(mock_model):
    t = kv_to_table([("k", "v")])
    with pytest.raises(TemplateError):
        model_api_processor(t, t.properties,
                            {"prompt_template": "no placeholder",
                             "endpoint": mock_model.url})


def test_model_api_highlighted_linearizer(mock_model):
    from tabbench.table import toggle_highlight

    t = toggle_highlight(kv_to_table([("k", "v"), ("x", "y")]), Coord(0, 1))
    text = model_api_processor(
        t, t.properties,
        {"endpoint": mock_model.url, "linearizer": "highlighted"},
    )
    assert text == "[R] [C] v"


def test_model_api_unreachable_endpoint_reports_elapsed():
    t = kv_to_table([("k", "v")])
    with pytest.raises(UpstreamError) as err:
        model_api_processor(
            t, t.properties,
            {"endpoint": "http://127.0.0.1:1/generate", "timeout_ms": "400"},
        )
    assert "127.0.0.1:1" in str(err.value)
    assert "ms" in str(err.value)


def test_model_api_no_endpoint():
    t = kv_to_table([("k", "v")])
    with pytest.raises(UpstreamError):
        model_api_processor(t, t.properties, {})


# --- run_pipeline ------------------------------------------------------------------


def make_datasets(dataset_dir):
    from tabbench.adapters import load_all_datasets

    return load_all_datasets(dataset_dir)


def test_run_model_api_pipeline(dataset_dir, mock_model):
    datasets = make_datasets(dataset_dir)
    request = PipelineRequest(
        dataset_id="e2e_mini", split="dev", index=0,
        params={"endpoint": mock_model.url},
    )
    output = run_pipeline("model_api", request, datasets)
    assert output.kind == "text"
    assert "Café Sicilia" in output.text


def test_run_graph_pipeline_on_kv_is_type_mismatch(dataset_dir):
    datasets = make_datasets(dataset_dir)
    request = PipelineRequest(dataset_id="e2e_mini", split="dev", index=0)
    with pytest.raises(PipelineError) as err:
        run_pipeline("rdf_graph", request, datasets)
    assert isinstance(err.value.cause, TypeMismatchError)
    assert err.value.processor == "rdf_graph"


def test_run_graph_pipeline_on_graph_dataset(dataset_dir):
    datasets = make_datasets(dataset_dir)
    request = PipelineRequest(dataset_id="webnlg_mini", split="dev", index=0)
    output = run_pipeline("rdf_graph", request, datasets)
    assert output.kind == "graph"
    labels = {n.label for n in output.graph.nodes}
    assert "Aarhus" in labels and "Denmark" in labels


def test_override_changes_prompt_and_datasets_stay_pristine(dataset_dir, mock_model):
    datasets = make_datasets(dataset_dir)
    original = datasets["e2e_mini"].split("dev")[0].table
    edited = set_cell_value(original, Coord(0, 1), "the National Theatre")
    request = PipelineRequest(
        dataset_id="e2e_mini", split="dev", index=0,
        table_override=edited,
        params={"endpoint": mock_model.url},
    )
    output = run_pipeline("model_api", request, datasets)
    assert "the National Theatre" in output.text
    assert "Café Sicilia" not in output.text
    # stored example untouched
    after = datasets["e2e_mini"].split("dev")[0].table
    assert after == original
    assert "Café Sicilia" in linearize(after)


def test_invalid_override_is_rejected(dataset_dir):
    datasets = make_datasets(dataset_dir)
    bad = Table(grid=((AnchorCell(value="a", col_span=5),),))
    request = PipelineRequest(dataset_id="e2e_mini", split="dev", index=0,
                              table_override=bad)
    with pytest.raises(InvalidTableError):
        run_pipeline("model_api", request, datasets)


def test_unknown_pipeline_and_example(dataset_dir):
    datasets = make_datasets(dataset_dir)
    request = PipelineRequest(dataset_id="e2e_mini", split="dev", index=0)
    with pytest.raises(NotFoundError):
        run_pipeline("nope", request, datasets)
    with pytest.raises(NotFoundError):
        run_pipeline("model_api",
                     PipelineRequest(dataset_id="e2e_mini", split="dev", index=99),
                     datasets)
    with pytest.raises(NotFoundError):
        run_pipeline("model_api",
                     PipelineRequest(dataset_id="nope", split="dev", index=0),
                     datasets)


def test_pipeline_spec_rejects_unknown_processor():
    with pytest.raises(NotFoundError):
        PipelineSpec(id="x", processors=("unheard_of",))


def test_default_registry_ids():
    assert default_pipelines().ids() == ["model_api", "rdf_graph"]


def test_prompt_construction_is_deterministic(dataset_dir, mock_model):
    datasets = make_datasets(dataset_dir)
    request = PipelineRequest(
        dataset_id="webnlg_mini", split="dev", index=1,
        params={"endpoint": mock_model.url, "prompt_template": "T: {input}"},
    )
    a = run_pipeline("model_api", request, datasets)
    b = run_pipeline("model_api", request, datasets)
    assert a == b
