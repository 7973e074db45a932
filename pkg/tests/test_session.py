import json
import threading

from tabbench.session import SessionState, load_session, persist_session


def test_round_trip(tmp_path):
    state = SessionState(
        notes={("e2e_mini", "dev", 0): "interesting", ("webnlg_mini", "dev", 3): "check"},
        favorites={("e2e_mini", "dev", 1)},
    )
    path = tmp_path / "session.json"
    persist_session(state, path)
    assert load_session(path) == state


def test_missing_file_is_empty():
    state = load_session("/nonexistent/dir/session.json")
    assert state == SessionState()


def test_corrupt_file_falls_back_to_empty(tmp_path, caplog):
    path = tmp_path / "session.json"
    path.write_text("{broken json", encoding="utf-8")
    with caplog.at_level("ERROR"):
        state = load_session(path)
    assert state == SessionState()
    assert any("corrupt" in r.message for r in caplog.records)


def test_persisted_file_is_valid_sorted_json(tmp_path):
    state = SessionState(notes={("b", "dev", 2): "x", ("a", "dev", 1): "y"})
    path = tmp_path / "session.json"
    persist_session(state, path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    assert list(raw["notes"]) == ["a/dev/1", "b/dev/2"]


def test_concurrent_writes_never_interleave(tmp_path):
    """Stress atomic replacement: every observed file state is one of the
    written states, never a mix."""
    path = tmp_path / "session.json"
    states = [
        SessionState(notes={("ds", "dev", i): f"note {i}" * 50}) for i in range(8)
    ]
    expected = {json.dumps(s.to_payload(), ensure_ascii=False, indent=2) for s in states}

    def writer(state):
        for _ in range(20):
            persist_session(state, path)

    threads = [threading.Thread(target=writer, args=(s,)) for s in states]
    for t in threads:
        t.start()
    seen = []
    for _ in range(200):
        if path.exists():
            content = path.read_text(encoding="utf-8")
            if content:
                seen.append(content)
    for t in threads:
        t.join()
    assert seen, "reader never observed a session file"
    for content in seen:
        assert content in expected
