"""Drive the HTTP service end to end from a client's point of view.

Starts the service on a local port in a background thread, then issues the
same requests a UI would: generate a dataset, render it to PNG, estimate
counts, and compare opacity variants in one call.
"""

import json
import threading
import time
import urllib.request

import uvicorn

from percepta.service import create_app

HOST, PORT = "127.0.0.1", 8901
BASE = f"http://{HOST}:{PORT}"

config = uvicorn.Config(create_app(static_dir=None), host=HOST, port=PORT,
                        log_level="error")
server = uvicorn.Server(config)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.02)


def post(path, payload):
    req = urllib.request.Request(BASE + path, data=json.dumps(payload).encode(),
                                 headers={"content-type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        body = resp.read()
    return body


with urllib.request.urlopen(BASE + "/api/health") as resp:
    print("health:", resp.read().decode())

dataset = json.loads(post("/api/generate", {
    "schema": 1,
    "params": {"width": 550, "height": 550, "cluster_count": 5,
               "distribution_size": 35.0, "point_count": 2000, "snr": 10},
    "seed": 21, "min_center_separation": 130.0}))
print(f"generated {len(dataset['points'])} points")

png = post("/api/render", {"schema": 1, "dataset": dataset,
                           "render": {"point_area": 3.0, "opacity": 1.0}})
print(f"rendered PNG: {len(png)} bytes, magic={png[:4]!r}")

estimate = json.loads(post("/api/estimate", {
    "schema": 1, "model": "density", "source": {"dataset": dataset},
    "density": {"bin_size": 20, "mode": "coverage"}, "threshold": 0.1}))
print(f"density count at T=0.1: {estimate['count_at']['count']}")
print(f"breakpoints: {[round(b, 3) for b in estimate['threshold_plot']['breakpoints'][:5]]}")

compare = json.loads(post("/api/compare", {"schema": 1, "requests": [
    {"schema": 1, "model": "density", "source": {"dataset": dataset},
     "density": {"bin_size": 20, "mode": "intensity_sum"},
     "overrides": {"point_area": 7.0, "opacity": o}}
    for o in (0.1, 1.0)]}))
tops = [r["threshold_plot"]["breakpoints"][0] for r in compare["responses"]]
print(f"top breakpoint at O=0.1 vs O=1.0: {tops[0]:.4f} vs {tops[1]:.4f}")

server.should_exit = True
thread.join(timeout=5)
print("service stopped")
