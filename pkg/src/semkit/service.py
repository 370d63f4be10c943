"""HTTP review service: candidate triage, ad-hoc parsing, and iteration.

Stores live in memory; every mutation is serialized through one lock and
persisted to the store files (write-temp-then-rename) before the response
is sent, so a killed service never leaves half-written files. Reads are
lock-free against the in-memory snapshot.

Routes (JSON unless noted):

    GET  /stats
    GET  /candidates?status=S&kind=K&page=N&per_page=M
    GET  /candidates/{id}
    POST /candidates/{id}/decision   {"decision": "accept"|"reject", "meaning": optional}
    POST /iterate                    {"rounds": N}
    GET  /parse?text=...&mode=fast|exhaustive
    GET  /grammar/phrase_patterns
    GET  /grammar/subsentence_patterns
    GET  /...                        static review-UI files when configured
"""

from __future__ import annotations

import json
import logging
import mimetypes
import os
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .candidates import CandidateStore
from .config import Config
from .errors import SemkitError
from .grammar import GrammarBase, serialize_meaning
from .kb import KnowledgeBase
from .learn import apply_candidate
from .parse import parse_sentence, sentence_to_dict
from .pipeline import iterate_rounds, persist_stores

log = logging.getLogger(__name__)


class ReviewService:
    def __init__(
        self,
        kb: KnowledgeBase,
        gb: GrammarBase,
        store: CandidateStore,
        *,
        kb_dir: str | None = None,
        grammar_dir: str | None = None,
        candidates_path: str | None = None,
        corpus_path: str | None = None,
        config: Config | None = None,
        static_dir: str | None = None,
    ):
        self.kb = kb
        self.gb = gb
        self.store = store
        self.kb_dir = kb_dir
        self.grammar_dir = grammar_dir
        self.candidates_path = candidates_path
        self.corpus_path = corpus_path
        self.config = config or Config()
        self.static_dir = static_dir
        self.write_lock = threading.Lock()

    def persist(self) -> None:
        persist_stores(
            self.kb,
            self.gb,
            self.store,
            self.kb_dir,
            self.grammar_dir,
            self.candidates_path,
        )

    # -- read endpoints ----------------------------------------------------

    def stats(self) -> dict:
        counts = self.kb.counts()
        by_status = {}
        for status in ("pending", "accepted", "rejected"):
            by_status[status] = len(self.store.filter(status=status))
        return {
            "knowledge_base": counts,
            "grammar": {
                "phrase_patterns": len(self.gb.phrase_patterns),
                "subsentence_patterns": len(self.gb.subsentence_patterns),
            },
            "candidates": by_status,
        }

    def list_candidates(self, status, kind, page, per_page) -> dict:
        matched = self.store.filter(status=status, kind=kind)
        matched.sort(key=lambda c: (-c.support, c.id))
        total = len(matched)
        start = (page - 1) * per_page
        items = [c.to_dict() for c in matched[start : start + per_page]]
        return {"items": items, "page": page, "per_page": per_page, "total": total}

    def phrase_patterns(self) -> list[dict]:
        return [
            {
                "id": p.id,
                "features": [{"kind": f.kind, "value": f.value} for f in p.features],
                "core_word_index": p.core_word_index,
                "pos_tag": p.pos_tag,
                "meaning": p.meaning,
                "status": p.status,
            }
            for p in self.gb.phrase_patterns
        ]

    def subsentence_patterns(self) -> list[dict]:
        return [
            {
                "parse_str": sp.parse_str,
                "ss_type": sp.ss_type,
                "ss_type2": sp.ss_type2,
                "meaning": serialize_meaning(sp.meaning),
                "status": sp.status,
            }
            for sp in sorted(self.gb.subsentence_patterns.values(), key=lambda s: s.parse_str)
        ]

    def parse_text(self, text: str, mode: str) -> dict:
        sp = parse_sentence(
            self.kb,
            self.gb,
            text,
            mode,
            max_elements=self.config.exhaustive_max_elements,
            max_derivations=self.config.exhaustive_max_derivations,
        )
        return sentence_to_dict(sp)

    # -- write endpoints ---------------------------------------------------

    def decide(self, cid: int, decision: str, meaning: str | None) -> dict:
        with self.write_lock:
            cand = self.store.get(cid)
            if cand is None:
                raise KeyError(cid)
            ok = apply_candidate(self.kb, self.gb, cand, decision, meaning=meaning)
            self.persist()
            return {"applied": ok, "candidate": cand.to_dict()}

    def iterate(self, rounds: int) -> dict:
        if not self.corpus_path:
            raise SemkitError("service started without --corpus; POST /iterate unavailable")
        with self.write_lock:
            reports = iterate_rounds(
                self.kb,
                self.gb,
                self.store,
                self.corpus_path,
                self.config,
                rounds,
                kb_dir=self.kb_dir,
                grammar_dir=self.grammar_dir,
                candidates_path=self.candidates_path,
            )
            self.persist()
            return {
                "reports": [
                    {
                        "iteration": r.iteration,
                        "sentences_total": r.sentences_total,
                        "sentences_parsed": r.sentences_parsed,
                        "subsentence_coverage": r.subsentence_coverage,
                        "candidates_emitted": r.candidates_emitted,
                        "wall_time_seconds": r.wall_time_seconds,
                    }
                    for r in reports
                ]
            }


_CANDIDATE_ID_RE = re.compile(r"^/candidates/(\d+)$")
_DECISION_RE = re.compile(r"^/candidates/(\d+)/decision$")


class _Handler(BaseHTTPRequestHandler):
    service: ReviewService  # set by make_server

    def log_message(self, fmt, *args):  # route through logging, not stderr writes
        log.debug("%s " + fmt, self.address_string(), *args)

    # -- helpers -----------------------------------------------------------

    def _send_json(self, obj, status=200):
        body = json.dumps(obj, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_json(self, status, message):
        self._send_json({"error": message}, status=status)

    def _read_json_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ValueError(f"bad JSON body: {exc}") from None
        if not isinstance(obj, dict):
            raise ValueError("body must be a JSON object")
        return obj

    def _serve_static(self, path):
        root = self.service.static_dir
        if not root:
            self._send_error_json(404, "not found")
            return
        rel = path.lstrip("/") or "index.html"
        full = os.path.realpath(os.path.join(root, rel))
        if not full.startswith(os.path.realpath(root) + os.sep) and full != os.path.realpath(root):
            self._send_error_json(404, "not found")
            return
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        if not os.path.isfile(full):
            self._send_error_json(404, "not found")
            return
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        with open(full, "rb") as fh:
            body = fh.read()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    # -- routing -----------------------------------------------------------

    def do_GET(self):
        svc = self.service
        url = urlparse(self.path)
        query = parse_qs(url.query)
        try:
            if url.path == "/stats":
                self._send_json(svc.stats())
            elif url.path == "/candidates":
                status = query.get("status", [None])[0]
                kind = query.get("kind", [None])[0]
                page = max(1, int(query.get("page", ["1"])[0]))
                per_page = max(1, min(500, int(query.get("per_page", ["50"])[0])))
                self._send_json(svc.list_candidates(status, kind, page, per_page))
            elif m := _CANDIDATE_ID_RE.match(url.path):
                cand = svc.store.get(int(m.group(1)))
                if cand is None:
                    self._send_error_json(404, f"no candidate {m.group(1)}")
                else:
                    self._send_json(cand.to_dict())
            elif url.path == "/parse":
                text = query.get("text", [""])[0]
                mode = query.get("mode", ["fast"])[0]
                if mode not in ("fast", "exhaustive"):
                    self._send_error_json(400, f"bad mode {mode!r}")
                    return
                self._send_json(svc.parse_text(text, mode))
            elif url.path == "/grammar/phrase_patterns":
                self._send_json(svc.phrase_patterns())
            elif url.path == "/grammar/subsentence_patterns":
                self._send_json(svc.subsentence_patterns())
            else:
                self._serve_static(url.path)
        except ValueError as exc:
            self._send_error_json(400, str(exc))
        except SemkitError as exc:
            self._send_error_json(400, str(exc))
        except Exception:
            log.exception("GET %s failed", self.path)
            self._send_error_json(500, "internal error")

    def do_POST(self):
        svc = self.service
        url = urlparse(self.path)
        try:
            if m := _DECISION_RE.match(url.path):
                body = self._read_json_body()
                decision = body.get("decision")
                if decision not in ("accept", "reject"):
                    self._send_error_json(400, "decision must be 'accept' or 'reject'")
                    return
                meaning = body.get("meaning")
                try:
                    self._send_json(svc.decide(int(m.group(1)), decision, meaning))
                except KeyError:
                    self._send_error_json(404, f"no candidate {m.group(1)}")
            elif url.path == "/iterate":
                body = self._read_json_body()
                rounds = body.get("rounds", 1)
                if not isinstance(rounds, int) or rounds < 0 or rounds > 100:
                    self._send_error_json(400, "rounds must be an integer in 0..100")
                    return
                self._send_json(svc.iterate(rounds))
            else:
                self._send_error_json(404, "not found")
        except ValueError as exc:
            self._send_error_json(400, str(exc))
        except SemkitError as exc:
            self._send_error_json(400, str(exc))
        except Exception:
            log.exception("POST %s failed", self.path)
            self._send_error_json(500, "internal error")


def make_server(service: ReviewService, host: str, port: int) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, port), handler)


def serve(
    kb: KnowledgeBase,
    gb: GrammarBase,
    store: CandidateStore,
    host: str,
    port: int,
    **kwargs,
) -> int:
    service = ReviewService(kb, gb, store, **kwargs)
    try:
        server = make_server(service, host, port)
    except OSError as exc:
        log.error("cannot bind %s:%d: %s", host, port, exc)
        return 1
    log.info("review service on http://%s:%d", host, server.server_address[1])
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0
