"""Regenerate the recorded API fixtures used by the frontend tests.

Run against a live service so the fixtures are genuine wire documents:

    percepta serve --bind 127.0.0.1:8907 &
    python3 test/fixtures/record_fixture.py http://127.0.0.1:8907

Writes estimate_response.json (one estimate response) and counts_at.json
(100 thresholds with the server's cluster count at each, every count
taken from a separate /api/estimate round trip).
"""

import json
import sys
import urllib.request
from pathlib import Path

HERE = Path(__file__).resolve().parent

REQUEST = {
    "schema": 1,
    "model": "density",
    "source": {
        "generate": {
            "params": {
                "width": 550,
                "height": 550,
                "cluster_count": 5,
                "distribution_size": 30.0,
                "point_count": 2500,
                "snr": 10.0,
            },
            "seed": 42,
            "min_center_separation": 120.0,
        }
    },
    "density": {"bin_size": 20, "mode": "coverage"},
    "overrides": {"point_area": 3.0, "opacity": 1.0},
}


def post(base, path, payload):
    data = json.dumps(payload).encode()
    req = urllib.request.Request(
        base + path, data=data, headers={"content-type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


def main():
    base = sys.argv[1] if len(sys.argv) > 1 else "http://127.0.0.1:8907"
    response = post(base, "/api/estimate", REQUEST)
    (HERE / "estimate_response.json").write_text(json.dumps(response, indent=2) + "\n")

    breakpoints = response["threshold_plot"]["breakpoints"]
    top = breakpoints[0] * 1.15 if breakpoints else 1.0
    exact = breakpoints[:12]
    grid = [i * top / 87 for i in range(88)]
    thresholds = sorted(set(exact + grid))[:100]
    while len(thresholds) < 100:
        thresholds.append(top * (1 + len(thresholds) / 100))

    samples = []
    for t in thresholds:
        probe = dict(REQUEST)
        probe["threshold"] = t
        answer = post(base, "/api/estimate", probe)
        samples.append({
            "threshold": answer["count_at"]["threshold"],
            "count": answer["count_at"]["count"],
        })
    (HERE / "counts_at.json").write_text(json.dumps({"samples": samples}, indent=2) + "\n")
    print(f"recorded {len(samples)} samples, "
          f"{len(breakpoints)} breakpoints, top={breakpoints[0]:.6f}")


if __name__ == "__main__":
    main()
