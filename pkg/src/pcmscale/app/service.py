"""HTTP front of the survey service, on the standard library's http.server.

Routes::

    POST /sessions                  {seed?, items?}   -> {"session_id": ...}
    GET  /sessions/{id}/next                          -> question JSON
    POST /sessions/{id}/answers     answer JSON       -> {"accepted": ..., ...}
    GET  /export?format=csv|jsonl                     -> completed sessions

Permissive CORS headers are set on every response so a browser questionnaire
served from another origin can drive the API directly.
"""

from __future__ import annotations

import io
import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..dataset import export_records
from .sessions import AnswerError, Item, SurveyService, UnknownSessionError
from .store import RecordLog

__all__ = ["SurveyHttpServer", "serve"]

_SESSION_NEXT = re.compile(r"^/sessions/([0-9a-f]+)/next$")
_SESSION_ANSWERS = re.compile(r"^/sessions/([0-9a-f]+)/answers$")


class _Handler(BaseHTTPRequestHandler):
    service: SurveyService  # injected by the server factory
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    # -- helpers -------------------------------------------------------------

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(body)

    def _send_json(self, status: int, obj) -> None:
        body = json.dumps(obj, ensure_ascii=False).encode("utf-8")
        self._send(status, body, "application/json; charset=utf-8")

    def _read_json(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            return json.loads(raw)
        except json.JSONDecodeError:
            raise AnswerError("request body is not valid JSON")

    # -- routes ----------------------------------------------------------------

    def do_OPTIONS(self):
        self._send(204, b"", "text/plain")

    def do_GET(self):
        path, _, query = self.path.partition("?")
        m = _SESSION_NEXT.match(path)
        if m:
            try:
                self._send_json(200, self.service.next_question(m.group(1)))
            except UnknownSessionError:
                self._send_json(404, {"error": f"unknown session {m.group(1)}"})
            return
        if path == "/export":
            params = dict(
                part.split("=", 1) for part in query.split("&") if "=" in part
            )
            fmt = params.get("format", "csv").lower()
            if fmt not in ("csv", "jsonl"):
                self._send_json(400, {"error": f"unknown format {fmt!r}"})
                return
            buf = io.StringIO()
            export_records(self.service.export_records(), buf, format=fmt)
            ctype = "text/csv" if fmt == "csv" else "application/x-ndjson"
            self._send(200, buf.getvalue().encode("utf-8"), f"{ctype}; charset=utf-8")
            return
        self._send_json(404, {"error": f"no such path {path!r}"})

    def do_POST(self):
        path = self.path.partition("?")[0]
        if path == "/sessions":
            try:
                body = self._read_json()
            except AnswerError as exc:
                self._send_json(400, {"error": str(exc)})
                return
            try:
                items = None
                if "items" in body:
                    items = [
                        Item(obj["name"], tuple(obj["rgb"])) for obj in body["items"]
                    ]
                state = self.service.create_session(items=items, seed=body.get("seed"))
            except (ValueError, KeyError, TypeError) as exc:
                self._send_json(400, {"error": str(exc)})
                return
            self._send_json(200, {"session_id": state.session_id})
            return
        m = _SESSION_ANSWERS.match(path)
        if m:
            try:
                answer = self._read_json()
                result = self.service.submit_answer(m.group(1), answer)
            except UnknownSessionError:
                self._send_json(404, {"error": f"unknown session {m.group(1)}"})
                return
            except AnswerError as exc:
                self._send_json(400, {"accepted": False, "error": str(exc)})
                return
            self._send_json(200, result)
            return
        self._send_json(404, {"error": f"no such path {path!r}"})


class SurveyHttpServer:
    """Threaded HTTP server wrapper; ``port=0`` picks a free port."""

    def __init__(
        self,
        store: RecordLog,
        host: str = "127.0.0.1",
        port: int = 0,
        session_seed: int | None = None,
    ):
        self.service = SurveyService(store, session_seed=session_seed)
        handler = type("BoundHandler", (_Handler,), {"service": self.service})
        self._httpd = ThreadingHTTPServer((host, port), handler)
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> None:
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread:
            self._thread.join()

    def serve_forever(self) -> None:
        self._httpd.serve_forever()


def serve(store_path: str, host: str = "127.0.0.1", port: int = 8000) -> SurveyHttpServer:
    store = RecordLog(store_path)
    return SurveyHttpServer(store, host=host, port=port)
