import json
import subprocess
import sys

cli = sys.argv[1]
runs = [
    ["check", "all", "--order", "30", "--jobs", "2"],
    ["transform", "RR", "--tau", "i", "--tau", "1/5+1/2*i"],
    ["list", "transforms"],
]
for args in runs:
    bodies = []
    for _ in range(2):
        out = subprocess.run([cli, *args, "--format", "json"], check=True, capture_output=True, text=True).stdout
        doc = json.loads(out)
        assert doc["schema"] == 1, args
        doc.pop("timing")
        bodies.append(json.dumps(doc, sort_keys=False))
    if bodies[0] != bodies[1]:
        sys.exit("report differs between runs: " + " ".join(args))
print("stable")
