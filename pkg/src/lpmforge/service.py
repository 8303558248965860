"""HTTP JSON API over completed mining runs for the explorer UI: listing,
re-ranking with analyst-chosen weights, grouping, filtering, and per-activity
attribute overlays. Read-only over the store; mining happens in the CLI.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .quality import RankingWeights
from .runstore import RunStore, rerank_document

DEFAULT_PORT = 8173


class RerankRequest(BaseModel):
    support: float = Field(ge=0)
    confidence: float = Field(ge=0)
    language_fit: float = Field(ge=0)
    determinism: float = Field(ge=0)
    coverage: float = Field(ge=0)
    c: Optional[float] = Field(default=None, gt=0)


def create_app(data_dir: str | Path, ui_dir: Optional[str | Path] = None) -> FastAPI:
    store = RunStore(Path(data_dir))
    app = FastAPI(title="lpmforge results service", openapi_url="/spec")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if ui_dir is None:
        ui_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    ui_dir = Path(ui_dir)
    if ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    def get_doc(run_id: str) -> dict:
        doc = store.load(run_id)
        if doc is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        return doc

    @app.get("/runs")
    def list_runs():
        return store.list_runs()

    @app.get("/runs/{run_id}")
    def get_run(
        run_id: str,
        min_activities: int = Query(default=0, ge=0),
        contains: Optional[str] = None,
        min_support: int = Query(default=0, ge=0),
    ):
        doc = get_doc(run_id)
        patterns = doc["patterns"]
        if min_activities:
            patterns = [p for p in patterns if len(p["activity_totals"]) >= min_activities]
        if contains:
            patterns = [p for p in patterns if contains in p["activity_totals"]]
        if min_support:
            patterns = [p for p in patterns if p["quality"]["support"] >= min_support]
        return {**{k: v for k, v in doc.items() if k != "log_index"}, "patterns": patterns}

    @app.post("/runs/{run_id}/rerank")
    def rerank(run_id: str, req: RerankRequest):
        doc = get_doc(run_id)
        try:
            weights = RankingWeights(
                req.support,
                req.confidence,
                req.language_fit,
                req.determinism,
                req.coverage,
                squash_constant=req.c,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        ranked = rerank_document(doc, weights)
        return {
            "run_id": run_id,
            "patterns": [
                {"tree": p["tree"], "quality": p["quality"], "net": p["net"]}
                for p in ranked
            ],
        }

    @app.get("/runs/{run_id}/lpms/{k}/overlay")
    def overlay(run_id: str, k: int, attribute: str):
        doc = get_doc(run_id)
        if attribute not in doc["attributes"]:
            raise HTTPException(status_code=404, detail=f"unknown attribute {attribute!r}")
        patterns = doc["patterns"]
        if not 0 <= k < len(patterns):
            raise HTTPException(status_code=404, detail=f"no pattern at rank {k}")
        pattern = patterns[k]
        index = doc["log_index"]
        histograms: dict[str, dict[str, int]] = {a: {} for a in pattern["activity_totals"]}
        for inst in pattern["instances"]:
            events = index[inst["trace"]]
            for lm in inst["landmarks"]:
                ev = events[lm - 1]
                value = ev["attributes"].get(attribute)
                if value is None:
                    continue
                hist = histograms[ev["activity"]]
                key = str(value)
                hist[key] = hist.get(key, 0) + inst["count"]
        return {"pattern": pattern["tree"], "attribute": attribute, "histograms": histograms}

    @app.get("/runs/{run_id}/groups")
    def groups(run_id: str, strategy: str = Query(default="alphabet", pattern="^(alphabet|ranking)$")):
        doc = get_doc(run_id)
        patterns = doc["patterns"]
        if strategy == "alphabet":
            buckets: dict[frozenset, list[dict]] = {}
            order: list[frozenset] = []
            for p in patterns:
                key = frozenset(p["activity_totals"])
                if key not in buckets:
                    buckets[key] = []
                    order.append(key)
                buckets[key].append(p)
            out = [
                {
                    "alphabet": sorted(key),
                    "head": buckets[key][0]["tree"],
                    "members": [p["tree"] for p in buckets[key]],
                }
                for key in order
            ]
        else:
            # ranking strategy: a pattern joins the first group whose head has a
            # superset alphabet (the head outranks it by list position)
            heads: list[tuple[frozenset, dict, list[dict]]] = []
            for p in patterns:
                sigma = frozenset(p["activity_totals"])
                for head_sigma, _head, members in heads:
                    if sigma <= head_sigma:
                        members.append(p)
                        break
                else:
                    heads.append((sigma, p, [p]))
            out = [
                {
                    "alphabet": sorted(sigma),
                    "head": head["tree"],
                    "members": [p["tree"] for p in members],
                }
                for sigma, head, members in heads
            ]
        return {"run_id": run_id, "strategy": strategy, "groups": out}

    return app


def serve(data_dir: str | Path, port: int = DEFAULT_PORT, host: str = "127.0.0.1"):
    import uvicorn

    uvicorn.run(create_app(data_dir), host=host, port=port)
