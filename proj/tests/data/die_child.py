# Answers argv[1] requests, then kills itself.
import json
import os
import signal
import sys

budget = int(sys.argv[1])
for line in sys.stdin:
    if budget == 0:
        os.kill(os.getpid(), signal.SIGKILL)
    budget -= 1
    req = json.loads(line)
    y = sum((v - 0.3) ** 2 for v in req["x"])
    sys.stdout.write(json.dumps({"id": req["id"], "y": y}) + "\n")
    sys.stdout.flush()
