"""Replay the two 27-line derivations of the 15-slot identity, then break one line."""
import tempfile
from pathlib import Path

from tetrarefl.verifier import DATA_DIR, Backend, check_r20, trace_appendix

print(check_r20("homogeneous", Backend.sample(200, seed=7)).summary())
print(check_r20("super", Backend.exhaustive(2)).summary())

for which in "AB":
    r = trace_appendix(which, Backend.sample(50, seed=8))
    print(r.summary(), f"({len(r.details)} lines)")

lines = (DATA_DIR / "appendix_a.txt").read_text().splitlines()
data = [i for i, l in enumerate(lines) if l.strip() and not l.startswith("#")]
lines[data[6]] = lines[data[6]].replace("R[1,2b,4]", "R[2b,1,4]", 1)
with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "broken.txt"
    path.write_text("\n".join(lines) + "\n")
    r = trace_appendix("A", Backend.sample(20, seed=1), path=path)
    print(r.equation, r.result, "-", r.counterexample.note)
