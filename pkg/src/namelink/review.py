"""Clerical-review service: queue state, append-only decision journal, and
the HTTP JSON API the browser client consumes.

Decisions are the expert labels: once a reviewer accepts or rejects a
possible-match pair, that pair enters the live confusion matrix, so the
metrics endpoint always reflects the review work done so far. The journal
is JSON-lines and replayed on startup, making the queue state and the
metrics reproducible after a restart.
"""

from __future__ import annotations

import json
import logging
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .engine import CandidatePair, MatchDecision, Outcome
from .errors import NamelinkError
from .metrics import MetricsReport, build_matrix

logger = logging.getLogger(__name__)


class UnknownPair(NamelinkError):
    pass


class AlreadyDecided(NamelinkError):
    pass


class BadDecision(NamelinkError):
    pass


class ReviewStore:
    """Queue items keyed by pair id, with a single-writer decision journal."""

    def __init__(self, items: Sequence[dict], journal_path: "Path | str"):
        self._items: dict[str, dict] = {}
        for item in items:
            entry = dict(item)
            entry.setdefault("status", "pending")
            entry.setdefault("accepted", [])
            entry.setdefault("decided_by", None)
            entry.setdefault("decided_at", None)
            self._items[entry["id"]] = entry
        self._journal_path = Path(journal_path)
        self._lock = threading.Lock()
        if self._journal_path.exists():
            self._replay()

    @classmethod
    def from_queue_file(cls, queue_path: "Path | str", journal_path: "Path | str") -> "ReviewStore":
        items = json.loads(Path(queue_path).read_text(encoding="utf-8"))
        return cls(items, journal_path)

    def _replay(self) -> None:
        for lineno, line in enumerate(
            self._journal_path.read_text(encoding="utf-8").splitlines(), 1
        ):
            if not line:
                continue
            entry = json.loads(line)
            item = self._items.get(entry["pair_id"])
            if item is None:
                logger.warning("journal:%d: unknown pair %r", lineno, entry["pair_id"])
                continue
            self._apply(item, entry)

    @staticmethod
    def _apply(item: dict, entry: dict) -> None:
        item["status"] = "accepted" if entry["action"] == "accept" else "rejected"
        item["accepted"] = list(entry.get("accepted", []))
        item["decided_by"] = entry.get("decided_by")
        item["decided_at"] = entry.get("decided_at")

    # Queries ---------------------------------------------------------------

    def get(self, pair_id: str) -> dict:
        item = self._items.get(pair_id)
        if item is None:
            raise UnknownPair(pair_id)
        return item

    def list_items(self, status: "str | None" = None) -> list[dict]:
        items = list(self._items.values())
        if status is not None:
            items = [i for i in items if i["status"] == status]
        # Hardest first: most machine suggestions at the top.
        return sorted(items, key=lambda i: (-len(i["candidates"]), i["id"]))

    def pending_count(self) -> int:
        return sum(1 for i in self._items.values() if i["status"] == "pending")

    def pending_by_multiplicity(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for item in self._items.values():
            if item["status"] == "pending":
                q = len(item["candidates"])
                out[q] = out.get(q, 0) + 1
        return out

    # Decisions -------------------------------------------------------------

    def decide(
        self,
        pair_id: str,
        accept: "Sequence[str] | None" = None,
        reject: bool = False,
        decided_by: "str | None" = None,
    ) -> dict:
        """Apply one decision atomically and append it to the journal."""
        if reject == bool(accept):
            raise BadDecision("exactly one of accept/reject required")
        if accept is not None and (
            not isinstance(accept, (list, tuple))
            or not accept
            or not all(isinstance(d, str) and d for d in accept)
        ):
            raise BadDecision("accept must be a non-empty list of destination ids")
        if decided_by is not None and not isinstance(decided_by, str):
            raise BadDecision("decided_by must be a string")
        with self._lock:
            item = self.get(pair_id)
            if item["status"] != "pending":
                raise AlreadyDecided(pair_id)
            entry = {
                "pair_id": pair_id,
                "action": "accept" if accept else "reject",
                "accepted": list(accept or []),
                "decided_by": decided_by,
                "decided_at": datetime.now(timezone.utc).isoformat(),
            }
            with self._journal_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(entry, sort_keys=True, ensure_ascii=False) + "\n")
            self._apply(item, entry)
            return item

    # Metrics ---------------------------------------------------------------

    def metrics_payload(self) -> dict:
        """Live metrics over the decided items; pending ones are excluded
        and reported as unreviewed."""
        decided = [i for i in self._items.values() if i["status"] != "pending"]
        payload: dict = {
            "decided": len(decided),
            "unreviewed": self.pending_count(),
            "pending_by_multiplicity": {
                str(k): v for k, v in sorted(self.pending_by_multiplicity().items())
            },
            "report": None,
            "matrix": None,
        }
        if not decided:
            return payload
        machine = [
            MatchDecision(
                source_id=item["source_id"],
                outcome=Outcome.POSSIBLE,
                candidates=tuple(
                    CandidatePair(
                        source_id=item["source_id"],
                        dest_id=c["dest_id"],
                        wat=c["wat"],
                        at=c["at"],
                        edit_distance=c["edit_distance"],
                        relax_level=c["relax_level"],
                        verified=True,
                    )
                    for c in item["candidates"]
                ),
            )
            for item in decided
        ]
        expert = {i["source_id"]: list(i["accepted"]) for i in decided}
        matrix = build_matrix(machine, expert)
        report = MetricsReport.from_matrix(matrix)
        payload["report"] = json.loads(report.to_json(matrix))
        payload["matrix"] = json.loads(matrix.to_json())
        return payload


def create_app(store: ReviewStore, static_dir: "Path | str | None" = None):
    """FastAPI application over a review store."""
    app = FastAPI(title="namelink review", docs_url=None, redoc_url=None)

    def _public(item: dict) -> dict:
        return dict(item)

    @app.get("/pairs")
    def list_pairs(status: "str | None" = None, page: int = 1, page_size: int = 20):
        if status is not None and status not in ("pending", "accepted", "rejected"):
            raise HTTPException(400, f"unknown status {status!r}")
        if page < 1 or page_size < 1:
            raise HTTPException(400, "page and page_size must be >= 1")
        items = store.list_items(status)
        start = (page - 1) * page_size
        return {
            "items": [_public(i) for i in items[start : start + page_size]],
            "total": len(items),
            "page": page,
            "page_size": page_size,
        }

    @app.get("/pairs/{pair_id}")
    def get_pair(pair_id: str):
        try:
            return _public(store.get(pair_id))
        except UnknownPair:
            raise HTTPException(404, f"no pair {pair_id!r}")

    @app.post("/pairs/{pair_id}/decision")
    async def decide(pair_id: str, request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise HTTPException(400, "body must be JSON")
        if not isinstance(body, dict):
            raise HTTPException(400, "body must be a JSON object")
        accept = body.get("accept")
        reject = body.get("reject", False)
        try:
            item = store.decide(
                pair_id,
                accept=accept,
                reject=bool(reject),
                decided_by=body.get("decided_by"),
            )
        except UnknownPair:
            raise HTTPException(404, f"no pair {pair_id!r}")
        except AlreadyDecided:
            raise HTTPException(409, f"pair {pair_id!r} already decided")
        except BadDecision as exc:
            raise HTTPException(400, str(exc))
        return JSONResponse({"item": _public(item)})

    @app.get("/metrics")
    def metrics():
        return store.metrics_payload()

    if static_dir is not None and Path(static_dir).exists():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(
    queue_path: "Path | str",
    journal_path: "Path | str",
    port: int = 8765,
    static_dir: "Path | str | None" = None,
    host: str = "127.0.0.1",
) -> None:
    import uvicorn

    store = ReviewStore.from_queue_file(queue_path, journal_path)
    app = create_app(store, static_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
