#!/usr/bin/env python3
"""Line-delimited JSON objective: y = sum((x - 0.3)^2)."""
import json
import sys

for line in sys.stdin:
    req = json.loads(line)
    y = sum((v - 0.3) ** 2 for v in req["x"])
    sys.stdout.write(json.dumps({"id": req["id"], "y": y}) + "\n")
    sys.stdout.flush()
