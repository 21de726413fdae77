import sys

for line in sys.stdin:
    sys.stdout.write("not json\n")
    sys.stdout.flush()
