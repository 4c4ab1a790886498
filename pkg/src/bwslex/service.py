"""Local annotation service: task assignment, durable response logging,
gold-question injection, and progress reporting.

State model: the only durable state is an append-only JSON-lines response
log plus a small campaign manifest. Every acknowledged submission has been
flushed and fsynced to the log before the acknowledgment is sent, and
restarting the service replays the log to reconstruct the campaign exactly.

HTTP endpoints (JSON bodies):
  GET  /api/task?annotator=<id>  -> {"tuple_id": ..., "items": [...]} or 204
  POST /api/response             -> {"status": "ok"|"duplicate"} or 400 {"error": ...}
  GET  /api/progress             -> {"tuples_total", "tuples_complete",
                                     "responses_total", "fraction_complete"}
  GET  /<asset>                  -> static annotation UI files
"""

import json
import logging
import mimetypes
import os
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from random import Random
from urllib.parse import parse_qs, urlparse

from .design import Tuple4
from .errors import BwslexError, DataError
from .scoring import GoldKey, Response

logger = logging.getLogger(__name__)

DEFAULT_TARGET = 10
DEFAULT_GOLD_RATE = 0.1
LOG_NAME = "responses.jsonl"
MANIFEST_NAME = "campaign.json"


class RejectedSubmission(BwslexError, ValueError):
    """A submission that violates the campaign rules; reason goes to the client."""


class Campaign:
    """In-memory campaign state, reconstructible by replaying the log.

    Not thread-safe by itself; AnnotationService serializes access.
    """

    def __init__(
        self,
        tuples: list[Tuple4],
        gold: GoldKey,
        target: int = DEFAULT_TARGET,
        gold_rate: float = DEFAULT_GOLD_RATE,
        seed: int = 0,
        allow_overshoot: bool = False,
    ):
        if target < 1:
            raise ValueError("target must be >= 1")
        if not 0 <= gold_rate <= 1:
            raise ValueError("gold_rate must be in [0, 1]")
        unknown_gold = set(gold) - {t.tuple_id for t in tuples}
        if unknown_gold:
            raise DataError(f"gold key references unknown tuples: {sorted(unknown_gold)}")
        for tid, (expected_best, expected_worst) in gold.items():
            items = next(t.items for t in tuples if t.tuple_id == tid)
            if expected_best not in items or expected_worst not in items:
                raise DataError(f"gold answers for {tid} are not among its items")

        self.by_id = {t.tuple_id: t for t in tuples}
        self.gold = dict(gold)
        self.work_ids = [t.tuple_id for t in tuples if t.tuple_id not in gold]
        self.gold_ids = [t.tuple_id for t in tuples if t.tuple_id in gold]
        self.target = target
        self.gold_rate = gold_rate
        self.allow_overshoot = allow_overshoot
        self.rng = Random(seed)
        self.completed: dict[str, int] = {t.tuple_id: 0 for t in tuples}
        self.done_by: dict[str, set[str]] = {}
        self.open_by: dict[str, set[str]] = {}
        self.inflight: dict[str, int] = {t.tuple_id: 0 for t in tuples}
        self.n_logged = 0

    def _seen(self, annotator_id: str) -> set[str]:
        return self.done_by.get(annotator_id, set()) | self.open_by.get(annotator_id, set())

    def next_task(self, annotator_id: str) -> tuple[Tuple4, bool] | None:
        """Assign a tuple the annotator has not seen, least-covered first.

        Returns (tuple, is_gold) or None once no work tuple is available for
        this annotator. Gold questions are interleaved at gold_rate while
        work remains.
        """
        seen = self._seen(annotator_id)
        work = [
            tid for tid in self.work_ids
            if tid not in seen
            and (self.allow_overshoot or self.completed[tid] + self.inflight[tid] < self.target)
        ]
        if not work:
            return None
        chosen = None
        is_gold = False
        if self.gold_ids and self.rng.random() < self.gold_rate:
            gold_open = [tid for tid in self.gold_ids if tid not in seen]
            if gold_open:
                chosen = self.rng.choice(gold_open)
                is_gold = True
        if chosen is None:
            self.rng.shuffle(work)
            chosen = min(work, key=lambda tid: self.completed[tid] + self.inflight[tid])
        self.open_by.setdefault(annotator_id, set()).add(chosen)
        self.inflight[chosen] += 1
        return self.by_id[chosen], is_gold

    def validate_submission(
        self, annotator_id: str, tuple_id: str, best: str, worst: str
    ) -> tuple[Response, bool] | None:
        """Check a submission; returns (record, is_gold), or None when this
        (annotator, tuple) was already completed (idempotent duplicate).
        Raises RejectedSubmission with a client-facing reason otherwise."""
        tup = self.by_id.get(tuple_id)
        if tup is None:
            raise RejectedSubmission(f"unknown tuple {tuple_id!r}")
        if tuple_id in self.done_by.get(annotator_id, set()):
            return None
        if tuple_id not in self.open_by.get(annotator_id, set()):
            raise RejectedSubmission("tuple was not assigned to this annotator")
        if best == worst:
            raise RejectedSubmission("best equals worst")
        if best not in tup.items:
            raise RejectedSubmission(f"best {best!r} is not among the tuple items")
        if worst not in tup.items:
            raise RejectedSubmission(f"worst {worst!r} is not among the tuple items")
        record = Response(
            response_id=f"srv{self.n_logged:08d}",
            annotator_id=annotator_id,
            tuple_id=tuple_id,
            best=best,
            worst=worst,
            unix_ms=int(time.time() * 1000),
        )
        return record, tuple_id in self.gold

    def commit(self, record: Response) -> None:
        """Fold one logged response into the state (also used by replay)."""
        self.done_by.setdefault(record.annotator_id, set()).add(record.tuple_id)
        open_set = self.open_by.get(record.annotator_id)
        if open_set and record.tuple_id in open_set:
            open_set.discard(record.tuple_id)
            self.inflight[record.tuple_id] -= 1
        if record.tuple_id in self.completed:
            self.completed[record.tuple_id] += 1
        self.n_logged += 1

    def progress(self) -> dict:
        """Completion summary over work tuples; gold responses do not count."""
        total = len(self.work_ids)
        complete = sum(1 for tid in self.work_ids if self.completed[tid] >= self.target)
        responses_total = sum(self.completed[tid] for tid in self.work_ids)
        fraction = responses_total / (total * self.target) if total else 0.0
        return {
            "tuples_total": total,
            "tuples_complete": complete,
            "responses_total": responses_total,
            "fraction_complete": fraction,
        }

    def per_annotator_counts(self) -> dict[str, int]:
        return {a: len(done) for a, done in self.done_by.items()}


class AnnotationService:
    """Campaign plus durable log, with a single-writer lock around state."""

    def __init__(self, campaign: Campaign, data_dir: str | Path):
        self.campaign = campaign
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.log_path = self.data_dir / LOG_NAME
        self.lock = threading.Lock()
        self._replay()
        self._log_fh = open(self.log_path, "a", encoding="utf-8")
        self._write_manifest()

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        n = 0
        with open(self.log_path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    response = Response(
                        response_id=str(rec["response_id"]),
                        annotator_id=str(rec["annotator_id"]),
                        tuple_id=str(rec["tuple_id"]),
                        best=str(rec["best"]),
                        worst=str(rec["worst"]),
                        unix_ms=int(rec["unix_ms"]),
                    )
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise DataError(f"{self.log_path}:{lineno}: bad log record ({exc})") from None
                self.campaign.commit(response)
                n += 1
        if n:
            logger.info("replayed %d responses from %s", n, self.log_path)

    def _write_manifest(self) -> None:
        manifest = {
            "target_responses_per_tuple": self.campaign.target,
            "gold_rate": self.campaign.gold_rate,
            "work_tuples": len(self.campaign.work_ids),
            "gold_tuples": len(self.campaign.gold_ids),
            "log": LOG_NAME,
        }
        with open(self.data_dir / MANIFEST_NAME, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")

    def next_task(self, annotator_id: str) -> dict | None:
        if not annotator_id:
            raise RejectedSubmission("annotator id is required")
        with self.lock:
            assigned = self.campaign.next_task(annotator_id)
            if assigned is None:
                return None
            tup, _is_gold = assigned
            # the gold flag stays server-side; clients must not see it
            return {"tuple_id": tup.tuple_id, "items": list(tup.items)}

    def submit(self, annotator_id: str, tuple_id: str, best: str, worst: str) -> str:
        """Validate, append durably, then acknowledge. Returns the status."""
        with self.lock:
            verdict = self.campaign.validate_submission(annotator_id, tuple_id, best, worst)
            if verdict is None:
                return "duplicate"
            record, is_gold = verdict
            payload = {
                "response_id": record.response_id,
                "annotator_id": record.annotator_id,
                "tuple_id": record.tuple_id,
                "best": record.best,
                "worst": record.worst,
                "unix_ms": record.unix_ms,
                "gold": is_gold,
            }
            self._log_fh.write(json.dumps(payload) + "\n")
            self._log_fh.flush()
            os.fsync(self._log_fh.fileno())
            self.campaign.commit(record)
            return "ok"

    def progress(self) -> dict:
        with self.lock:
            return self.campaign.progress()

    def close(self) -> None:
        self._log_fh.close()


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def service(self) -> AnnotationService:
        return self.server.service  # type: ignore[attr-defined]

    @property
    def static_dir(self) -> Path | None:
        return self.server.static_dir  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):
        logger.debug("%s " + fmt, self.address_string(), *args)

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        url = urlparse(self.path)
        if url.path == "/api/task":
            annotator = parse_qs(url.query).get("annotator", [""])[0]
            try:
                task = self.service.next_task(annotator)
            except RejectedSubmission as exc:
                self._send_json(400, {"error": str(exc)})
                return
            if task is None:
                self.send_response(204)
                self.send_header("Content-Length", "0")
                self.end_headers()
                return
            self._send_json(200, task)
        elif url.path == "/api/progress":
            self._send_json(200, self.service.progress())
        else:
            self._serve_static(url.path)

    def do_POST(self):
        url = urlparse(self.path)
        if url.path != "/api/response":
            self._send_json(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            payload = json.loads(self.rfile.read(length) or b"{}")
            annotator_id = str(payload["annotator_id"])
            tuple_id = str(payload["tuple_id"])
            best = str(payload["best"])
            worst = str(payload["worst"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            self._send_json(400, {"error": "malformed request body"})
            return
        try:
            status = self.service.submit(annotator_id, tuple_id, best, worst)
        except RejectedSubmission as exc:
            self._send_json(400, {"error": str(exc)})
            return
        self._send_json(200, {"status": status})

    def _serve_static(self, path: str) -> None:
        root = self.static_dir
        if root is None:
            self._send_json(404, {"error": "no static assets configured"})
            return
        name = path.lstrip("/") or "index.html"
        target = (root / name).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        content_type = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def default_static_dir() -> Path | None:
    candidate = Path(__file__).parent / "static"
    return candidate if candidate.is_dir() else None


def make_server(
    service: AnnotationService,
    host: str = "127.0.0.1",
    port: int = 0,
    static_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), _Handler)
    server.service = service  # type: ignore[attr-defined]
    server.static_dir = Path(static_dir) if static_dir else default_static_dir()  # type: ignore[attr-defined]
    return server


def run_server(
    service: AnnotationService,
    host: str = "127.0.0.1",
    port: int = 0,
    static_dir: str | Path | None = None,
) -> None:
    server = make_server(service, host, port, static_dir)
    actual_port = server.server_address[1]
    print(f"listening on http://{host}:{actual_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
        service.close()
