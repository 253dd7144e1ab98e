"""Driving a live run over HTTP, the way the dashboard does.

Starts the service in-process, launches a fast-sampled run, watches the
telemetry stream, nudges the setpoint mid-run, and stops. Every number
printed here came over the wire as JSON.

Run:  python demos/08_live_service.py
"""

import json
import tempfile
import threading
import time

import httpx
import uvicorn

from fuzzytherm.service import create_app

records_dir = tempfile.mkdtemp(prefix="fuzzytherm-records-")
app = create_app(records_dir=records_dir)
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error"))
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.01)
port = server.servers[0].sockets[0].getsockname()[1]
base = f"http://127.0.0.1:{port}"
print(f"service at {base}, records in {records_dir}\n")

config = {
    "loop": {"setpoint": 45.0, "sample_period": 0.05, "duration": 120.0, "initial_temp": 25.0},
    "speed": 1.0,
}

with httpx.Client(base_url=base, timeout=10.0) as client:
    run_id = client.post("/runs", json=config).json()["run_id"]
    print(f"run {run_id} started; streaming:\n")
    with client.stream("GET", "/telemetry", timeout=httpx.Timeout(10.0, read=10.0)) as stream:
        count = 0
        for line in stream.iter_lines():
            if not line.strip():
                continue
            frame = json.loads(line)
            count += 1
            print(
                f"t={frame['t']:6.2f}  setpoint={frame['setpoint']:5.1f}  "
                f"sensed={frame['sensed']:6.2f}  fan={frame['fan_duty']:.3f}  "
                f"heater={frame['heater_duty']:.3f}"
            )
            if count == 8:
                ack = client.post("/runs/current/setpoint", json={"value": 50.0})
                print(f"  >> setpoint changed: {ack.json()}")
            if count >= 16:
                break
    stop = client.post("/runs/current/stop").json()
    record = client.get(stop["record"]).json()
    print(f"\nstopped; record holds {len(record['frames'])} frames "
          f"(summary: {record['summary']})")

server.should_exit = True
thread.join(timeout=5)
