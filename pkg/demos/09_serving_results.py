"""Persisting a run and exploring it over HTTP.

The CLI equivalent:

    lpmforge mine --log data/household.csv --case case --activity activity \
        --time timestamp --min-support 10 --max-iterations 2 --data-dir runs
    lpmforge serve --data-dir runs --port 8173

Endpoints: GET /runs, GET /runs/{id}, POST /runs/{id}/rerank,
GET /runs/{id}/lpms/{k}/overlay?attribute=..., GET /runs/{id}/groups,
OpenAPI at /spec. The browser explorer in frontend/ consumes exactly these.
"""

import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from lpmforge import CsvMapping, MinerConfig, RankingWeights, mine, parse_csv
from lpmforge.runstore import RunStore, build_run_document
from lpmforge.service import create_app

DATA = Path(__file__).parent.parent / "data" / "household.csv"
log = parse_csv(DATA.read_bytes(), CsvMapping("case", "activity", "timestamp"))

weights = RankingWeights()
result = mine(log, MinerConfig(min_support=10, min_determinism=0.6, max_iterations=2, top_k=10))
doc = build_run_document(log, result, {"demo": True}, weights)

data_dir = tempfile.mkdtemp(prefix="lpmforge-demo-")
RunStore(data_dir).save(doc)
client = TestClient(create_app(data_dir))

rid = doc["run_id"]
print("runs:", client.get("/runs").json())

ranking = client.get(f"/runs/{rid}").json()["patterns"]
print("\nstored order:", [p["tree"] for p in ranking][:5])

support_heavy = client.post(
    f"/runs/{rid}/rerank",
    json={"support": 1, "confidence": 0, "language_fit": 0, "determinism": 0, "coverage": 0},
).json()["patterns"]
print("support-only order:", [p["tree"] for p in support_heavy][:5])

overlay = client.get(f"/runs/{rid}/lpms/0/overlay", params={"attribute": "resource"}).json()
print(f"\nwho performs the fitting events of {overlay['pattern']}:")
for activity, hist in overlay["histograms"].items():
    print("  ", activity, hist)

groups = client.get(f"/runs/{rid}/groups", params={"strategy": "ranking"}).json()["groups"]
print("\nranking-based groups:", [(g["head"], len(g["members"])) for g in groups])
