"""Compare the two solvability verdicts on seeded random finite instances.

A finding is an instance whose configuration system has a non-zero
solution and yet no normalized one; each carries a nullspace vector and a
Farkas dual that both re-verify.
"""

import sys

from amen.commands import scan

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 2
count = int(sys.argv[2]) if len(sys.argv) > 2 else 300
result = scan(seed, count)
print(f"seed {seed}, {count} instances:", result["tallies"])
for f in result["findings"][:3]:
    inst = f["instance"]
    print(f"  #{f['index']}: {inst['structure']}, {len(inst['maps'])} map(s), configurations {f['configurations']}")
    print("     nullspace", [v["num"] + "/" + v["den"] for v in f["nonzero"]["values"]])
