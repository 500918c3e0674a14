"""HTTP/JSON review service backing the adjudication UI.

A small versioned surface:

    GET  /api/v1/runs                      run ids
    GET  /api/v1/runs/{run_id}/queue       review items (+ filters)
    POST /api/v1/items/{item_id}/claim     claim an item
    POST /api/v1/items/{item_id}/resolve   resolve with a decision payload
    GET  /api/v1/runs/{run_id}/report      recomputed metrics report

Authentication is a static reviewer-token map (config file): requests
carry ``Authorization: Bearer <token>`` and resolve to a reviewer id.
Item ids embed their run id (``run:00042``), so item routes need no run
parameter. Claims expire back to the queue after the run's idle timeout.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from fastapi import Depends, FastAPI, Header, HTTPException
from fastapi.responses import Response

from ..errors import (
    AlreadyClaimedError,
    MissingAssessmentError,
    NotClaimantError,
    StaleRevisionError,
    UnknownItemError,
)
from .runs import RunStore, report_bytes


def load_tokens(path: Union[str, Path]) -> dict[str, str]:
    """Token -> reviewer id map."""
    return {str(k): str(v) for k, v in json.loads(Path(path).read_text("utf-8")).items()}


def make_app(data_root: Union[str, Path], tokens: dict[str, str]) -> FastAPI:
    app = FastAPI(title="mecheval review service", version="1")
    store = RunStore(data_root)

    def reviewer_from(authorization: Optional[str] = Header(default=None)) -> str:
        if authorization is None or not authorization.startswith("Bearer "):
            raise HTTPException(status_code=401, detail="missing bearer token")
        token = authorization.removeprefix("Bearer ").strip()
        if token not in tokens:
            raise HTTPException(status_code=401, detail="unknown token")
        return tokens[token]

    def get_run(run_id: str):
        try:
            return store.get(run_id)
        except UnknownItemError:
            raise HTTPException(status_code=404, detail=f"no run {run_id!r}")

    def run_for_item(item_id: str):
        run_id = item_id.split(":", 1)[0]
        return get_run(run_id)

    @app.get("/api/v1/runs")
    def list_runs():
        return {"runs": store.run_ids()}

    @app.get("/api/v1/runs/{run_id}/queue")
    def queue(
        run_id: str,
        state: Optional[str] = None,
        kind: Optional[str] = None,
        paper: Optional[str] = None,
        reviewer: str = Depends(reviewer_from),
    ):
        run = get_run(run_id)
        items = run.items()
        if state:
            items = [i for i in items if i.state == state]
        if kind:
            items = [i for i in items if i.kind == kind]
        if paper:
            items = [i for i in items if i.payload.get("paper_id") == paper]
        return {
            "run_id": run_id,
            "status": run.status(),
            "counters": run.queue_counters(),
            "items": [run.item_view(i) for i in items],
        }

    @app.post("/api/v1/items/{item_id}/claim")
    def claim(item_id: str, reviewer: str = Depends(reviewer_from)):
        run = run_for_item(item_id)
        try:
            item = run.claim(item_id, reviewer)
        except UnknownItemError:
            raise HTTPException(status_code=404, detail=f"no item {item_id!r}")
        except AlreadyClaimedError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return {"item": run.item_view(item)}

    @app.post("/api/v1/items/{item_id}/resolve")
    def resolve(item_id: str, decision: dict, reviewer: str = Depends(reviewer_from)):
        run = run_for_item(item_id)
        try:
            item = run.resolve(item_id, reviewer, decision)
        except UnknownItemError:
            raise HTTPException(status_code=404, detail=f"no item {item_id!r}")
        except NotClaimantError as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except StaleRevisionError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except MissingAssessmentError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"item": run.item_view(item)}

    @app.get("/api/v1/runs/{run_id}/report")
    def report(run_id: str, reviewer: str = Depends(reviewer_from)):
        run = get_run(run_id)
        return Response(content=report_bytes(run), media_type="application/json")

    return app
