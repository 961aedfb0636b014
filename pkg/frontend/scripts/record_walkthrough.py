"""Record the review-service HTTP traffic for the UI walkthrough test.

Drives the real service through the exact request sequence the browser
client issues while deciding a 10-pair queue, and captures every response.
The vitest suite replays these responses from a mock fetch, so the UI is
tested against genuine backend payloads, and the final metrics are cross-
checked here against the evaluation module's own report.

Run from the repository root:  python3 frontend/scripts/record_walkthrough.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from namelink.engine import CandidatePair, MatchDecision, Outcome
from namelink.metrics import MetricsReport, build_matrix
from namelink.review import ReviewStore, create_app

OUT = Path(__file__).resolve().parent.parent / "test" / "fixtures" / "walkthrough.json"


def scripted_queue() -> list[dict]:
    items = []
    for i in range(10):
        q = (i % 4) + 1
        items.append(
            {
                "id": f"P{i:02d}",
                "source_id": f"P{i:02d}",
                "source_raw": f"Sample Source {i}",
                "source_tokens": ["sample", "source", str(i)],
                "candidates": [
                    {
                        "dest_id": f"D{i:02d}{j}",
                        "dest_raw": f"Sample Dest {i}.{j}",
                        "dest_tokens": ["sample", "dest"],
                        "wat": round(0.91 - 0.06 * j - 0.003 * i, 4),
                        "at": round(0.8 - 0.05 * j, 4),
                        "edit_distance": j + 1,
                        "relax_level": j % 3,
                        "alignment": [
                            {"source_token": "sample", "dest_token": "sample", "sim": 1.0},
                            {"source_token": "source", "dest_token": "dest", "sim": 0.4},
                        ],
                    }
                    for j in range(q)
                ],
            }
        )
    return items


def decision_body(index: int, item: dict) -> dict:
    if index % 3 == 0:
        return {"reject": True}
    take = 2 if index % 3 == 2 and len(item["candidates"]) >= 2 else 1
    return {"accept": [c["dest_id"] for c in item["candidates"][:take]]}


def main() -> None:
    interactions: list[dict] = []
    journal = OUT.parent / "_journal_tmp.jsonl"
    journal.unlink(missing_ok=True)
    store = ReviewStore(scripted_queue(), journal)
    client = TestClient(create_app(store))

    def record(method: str, path: str, body: "dict | None" = None) -> dict:
        if method == "GET":
            response = client.get(path)
        else:
            response = client.post(path, json=body)
        payload = response.json()
        interactions.append(
            {
                "method": method,
                "path": path,
                "request_body": body,
                "status": response.status_code,
                "response": payload,
            }
        )
        return payload

    list_path = "/pairs?page=1&page_size=100&status=pending"
    page = record("GET", list_path)
    record("GET", "/metrics")

    current = page["items"][0]["id"]
    record("GET", f"/pairs/{current}")
    for index in range(10):
        item = store.get(current)
        record("POST", f"/pairs/{current}/decision", decision_body(index, item))
        page = record("GET", list_path)
        record("GET", "/metrics")
        remaining = [i for i in page["items"] if i["id"] != current]
        if not remaining:
            break
        current = remaining[0]["id"]
        record("GET", f"/pairs/{current}")

    final_metrics = store.metrics_payload()

    # Cross-check: the served report must equal the evaluation module's
    # report over the same machine results and decisions.
    machine, expert = [], {}
    for item in store.list_items():
        machine.append(
            MatchDecision(
                source_id=item["source_id"],
                outcome=Outcome.POSSIBLE,
                candidates=tuple(
                    CandidatePair(
                        item["source_id"], c["dest_id"], c["wat"], c["at"],
                        c["edit_distance"], c["relax_level"], True,
                    )
                    for c in item["candidates"]
                ),
            )
        )
        expert[item["source_id"]] = list(item["accepted"])
    report = MetricsReport.from_matrix(build_matrix(machine, expert))
    evaluated = json.loads(report.to_json())
    assert final_metrics["report"]["proportions"] == evaluated["proportions"]
    assert final_metrics["report"]["percent"] == evaluated["percent"]

    fixture = {
        "queue": scripted_queue(),
        "interactions": interactions,
        "final_metrics": final_metrics,
        "evaluate_report": evaluated,
    }
    OUT.write_text(json.dumps(fixture, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    (OUT.parent / "_journal_tmp.jsonl").unlink()
    print(f"{len(interactions)} interactions -> {OUT}")


if __name__ == "__main__":
    main()
