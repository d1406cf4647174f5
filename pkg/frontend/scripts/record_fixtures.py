#!/usr/bin/env python3
"""Record real API exchanges for the frontend contract-replay tests.

Spins the service in-process on the astro-mini fixture and captures every
request/response pair the UI walkthrough performs into
tests/fixtures/exchanges.json. Rerun after changing the API surface:

    python3 scripts/record_fixtures.py
"""

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from fastapi.testclient import TestClient

from recoin.index import build_index, write_snapshot
from recoin.ingest import load_dump
from recoin.service import ApiConfig, build_app

ASTRO = [
    b'{"id":"A1","claims":{"P31":["Q5"],"P106":["QAST"],"P1":["x"],"P2":["x"],"P3":["x"]}}',
    b'{"id":"A2","claims":{"P31":["Q5"],"P106":["QAST"],"P1":["x"],"P2":["x"]}}',
    b'{"id":"A3","claims":{"P31":["Q5"],"P106":["QAST"],"P1":["x"]}}',
    b'{"id":"A4","claims":{"P31":["Q5"],"P106":["QAST"],"P1":["x"],"P2":["x"],"P3":["x"],"P4":["x"]}}',
]

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def fixed_clock():
    return datetime.fromisoformat("2026-08-10T12:00:00+00:00")


def main() -> int:
    import tempfile

    store = load_dump(iter(ASTRO))
    index = build_index(store)
    with tempfile.TemporaryDirectory() as tmp:
        snapshot = Path(tmp) / "astro.idx"
        write_snapshot(str(snapshot), index, store)
        config = ApiConfig(snapshot_path=str(snapshot), data_dir=tmp)
        client = TestClient(build_app(index, store, config, clock=fixed_clock))

        exchanges = []

        def call(method, path, body=None):
            if method == "GET":
                response = client.get(path)
            else:
                response = client.post(path, json=body)
            exchanges.append({
                "method": method,
                "path": path,
                "body": body,
                "status": response.status_code,
                "response": response.json(),
            })
            return response.json()

        call("GET", "/api/entity/A3")
        report = call("GET", "/api/entity/A3/completeness")
        missing = [m["property_id"] for m in report["missing"]]
        call("POST", "/api/entity/A3/whatif",
             {"deselected": missing, "min_count": None, "max_count": None})
        call("POST", "/api/entity/A3/whatif",
             {"deselected": ["P2"], "min_count": None, "max_count": None})
        call("POST", "/api/entity/A3/whatif",
             {"deselected": [], "min_count": 2, "max_count": None})

        session = call("POST", "/api/session",
                       {"item_id": "A3", "condition": "C4"})
        sid = session["session_id"]
        # the replay mock matches on the path, so pin a stable session id
        for record in exchanges:
            record["path"] = record["path"].replace(sid, "SID")
        call("POST", f"/api/session/{sid}/edit",
             {"property": "P2", "value": "x", "via_recoin": True})
        call("POST", f"/api/session/{sid}/edit",
             {"property": "P3", "value": "x", "via_recoin": True})
        call("POST", f"/api/session/{sid}/finalize", {})
        call("POST", f"/api/session/{sid}/report",
             {"comprehension": 3, "fairness": 6, "accuracy": 6, "trust": 5,
              "free_text": {}})

        for record in exchanges:
            record["path"] = record["path"].replace(sid, "SID")
            if isinstance(record["response"], dict) and \
                    record["response"].get("session_id") == sid:
                record["response"]["session_id"] = "SID"

    FIXTURES_DIR.mkdir(parents=True, exist_ok=True)
    out = FIXTURES_DIR / "exchanges.json"
    out.write_text(json.dumps(exchanges, indent=2, sort_keys=True) + "\n")
    print(f"recorded {len(exchanges)} exchanges -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
