"""Persistence of completed mining runs as flat JSON files.

A run id is a content hash of the configuration echo and the log digest, so
re-running identical inputs lands on the same file. Stored quality vectors
keep every raw measure so the service can re-rank without re-mining, and a
per-event attribute index supports overlays without re-reading the log.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .eventlog import EventLog
from .mining import MiningResult
from .petri import to_petri_net
from .quality import RankingWeights, aggregate_score

SCHEMA_VERSION = 1


def log_digest(log: EventLog) -> str:
    h = hashlib.sha256()
    for t in log:
        h.update(t.id.encode())
        for e in t.events:
            h.update(b"\x00" + e.activity.encode())
            h.update(str(e.timestamp).encode())
    return h.hexdigest()[:16]


def run_id_for(config_echo: dict, digest: str) -> str:
    payload = json.dumps({"config": config_echo, "log": digest}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def build_run_document(
    log: EventLog,
    result: MiningResult,
    config_echo: dict,
    weights: RankingWeights,
) -> dict:
    digest = log_digest(log)
    rid = run_id_for(config_echo, digest)
    patterns = []
    for ep in result.patterns:
        net = to_petri_net(ep.tree)
        patterns.append(
            {
                "tree": ep.key,
                "tree_json": ep.tree.to_json(),
                "net": net.to_json(),
                "quality": ep.quality.to_json(),
                "instances": ep.instances.to_json(),
                "activity_totals": ep.activity_totals,
                "activity_fitting": ep.activity_fitting,
            }
        )
    attribute_names = sorted(
        {k for t in log for e in t.events for k in e.attributes}
    )
    log_index = {
        t.id: [
            {"activity": e.activity, "attributes": dict(e.attributes)} for e in t.events
        ]
        for t in log
    }
    return {
        "schema": SCHEMA_VERSION,
        "run_id": rid,
        "log_digest": digest,
        "config": config_echo,
        "weights": {
            "support": weights.support,
            "confidence": weights.confidence,
            "language_fit": weights.language_fit,
            "determinism": weights.determinism,
            "coverage": weights.coverage,
            "c": weights.squash_constant,
        },
        "patterns": patterns,
        "attributes": attribute_names,
        "log_index": log_index,
    }


@dataclass
class RunStore:
    root: Path

    def __post_init__(self):
        self.root = Path(self.root)
        self.root.mkdir(parents=True, exist_ok=True)

    def save(self, document: dict) -> Path:
        path = self.root / f"{document['run_id']}.json"
        path.write_text(json.dumps(document, indent=1, sort_keys=True))
        return path

    def load(self, run_id: str) -> Optional[dict]:
        path = self.root / f"{run_id}.json"
        if not path.exists():
            return None
        return json.loads(path.read_text())

    def list_runs(self) -> list[dict]:
        out = []
        for path in sorted(self.root.glob("*.json")):
            doc = json.loads(path.read_text())
            out.append(
                {
                    "run_id": doc["run_id"],
                    "log_digest": doc["log_digest"],
                    "patterns": len(doc["patterns"]),
                    "config": doc.get("config", {}),
                }
            )
        return out


def rerank_document(doc: dict, weights: RankingWeights) -> list[dict]:
    """Recompute aggregates from stored raw measures; return patterns in the
    new order without touching the store."""
    ranked = []
    for p in doc["patterns"]:
        q = p["quality"]
        support = q["support"]
        c = weights.squash_constant if weights.squash_constant is not None else _default_c(doc)
        normalized = support / (support + c)
        agg = aggregate_score(
            weights,
            normalized,
            q["confidence"],
            q["language_fit"],
            q["determinism"],
            q["coverage"],
        )
        ranked.append({**p, "quality": {**q, "normalized_support": normalized, "aggregate": agg}})
    ranked.sort(key=lambda p: (-p["quality"]["aggregate"], -p["quality"]["support"], p["tree"]))
    return ranked


def _default_c(doc: dict) -> float:
    stored = doc.get("weights", {}).get("c")
    if stored:
        return stored
    return max(len(doc.get("log_index", {})), 1)
