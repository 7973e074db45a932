"""Bundled mock model endpoint for tests and demos.

Speaks the model wire protocol (POST ``{"prompt": str}`` -> 200
``{"text": str}``) and simply echoes the prompt back, so callers can
assert exactly what reached the model. Run standalone with
``python -m tabbench.mock_model --port 9876``.
"""

from __future__ import annotations

import argparse
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


class _EchoHandler(BaseHTTPRequestHandler):
    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):  # health probe
        self._send_json(200, {"status": "ok"})

    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length)
        try:
            obj = json.loads(raw)
            prompt = obj.get("prompt")
        except (ValueError, AttributeError):
            prompt = None
        if not isinstance(prompt, str):
            self._send_json(400, {"error": "bad_request", "detail": "body must be {\"prompt\": str}"})
            return
        self._send_json(200, {"text": prompt})

    def log_message(self, format, *args):  # keep test output quiet
        pass


class MockModelServer:
    """An echo model server running on a background thread."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self._server = ThreadingHTTPServer((host, port), _EchoHandler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}/generate"

    def start(self) -> "MockModelServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()
        self._thread.join(timeout=5)

    def __enter__(self) -> "MockModelServer":
        return self.start()

    def __exit__(self, *exc):
        self.stop()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Echo mock model endpoint")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=9876)
    args = parser.parse_args(argv)
    server = ThreadingHTTPServer((args.host, args.port), _EchoHandler)
    print(f"mock model listening on http://{args.host}:{args.port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
