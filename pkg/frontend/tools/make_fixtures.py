"""Regenerate the recorded service responses used by the frontend tests.

Run from the repository root with the package installed:

    python3 frontend/tools/make_fixtures.py

Each fixture stores the exact request sent and the exact JSON the service
returned, so the frontend tests exercise real response shapes without a
running server. The demo scenario here must stay identical to demoScenario()
in frontend/src/scenario.ts; a test guards that.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from passview.service.app import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

FIELD = {"length": 105, "width": 68, "attack_direction": "+x"}


def demo_record() -> dict:
    # keep in lockstep with demoScenario() in frontend/src/scenario.ts
    return {
        "passer": {"id": "p", "x": 50, "y": 34, "orientation": 0},
        "receivers": [
            {"id": "r1", "x": 70, "y": 34, "orientation": 180, "role": "forward"},
            {"id": "r2", "x": 60, "y": 20, "orientation": 90, "role": "midfielder"},
            {"id": "r3", "x": 58, "y": 50, "orientation": 200, "role": "midfielder"},
        ],
        "defenders": [
            {"id": "d1", "x": 58, "y": 33, "orientation": 200},
            {"id": "d2", "x": 66, "y": 40, "orientation": 180},
            {"id": "d3", "x": 63, "y": 24, "orientation": 150},
            {"id": "d4", "x": 75, "y": 30, "orientation": 170},
        ],
    }


def dragged_record() -> dict:
    # r1 dragged behind the passer: the passer looks toward +x, so the sight
    # triangles cannot overlap and r1's view score collapses to zero
    record = demo_record()
    record["receivers"][0]["x"] = 30
    return record


def main() -> None:
    client = TestClient(create_app())
    FIXTURES.mkdir(parents=True, exist_ok=True)
    for name, record in (("demo_eval", demo_record()), ("demo_dragged_eval", dragged_record())):
        request = {"scenario": record, "field": FIELD, "mode": "F"}
        response = client.post("/api/evaluate", json=request)
        response.raise_for_status()
        payload = {"request": request, "response": response.json()}
        out = FIXTURES / f"{name}.json"
        out.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
