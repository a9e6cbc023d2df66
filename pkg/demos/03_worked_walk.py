# Walk one S0 tuple to its S3 partner and write the trace as DOT files.
import sys
import tempfile

from rhp import ForestTuple, classify
from rhp.involutions import garsia_milne_backward, garsia_milne_forward

start = ForestTuple.from_edges(5, 3, [
    [(1, 5), (2, 0), (3, 4), (4, 1), (5, 0)],
    [(4, 3), (5, 4)],
    [(4, 2), (5, 2)],
])
print(classify(start))

end, log = garsia_milne_forward(start)
for step in log.steps:
    print(f"{step.involution:5} {step.sub_step:20} {step.snapshot}")
print(classify(end))

back, _ = garsia_milne_backward(end)
print("back to start:", back == start)

out_dir = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="rhp-trace-")
paths = log.write(out_dir)
print(len(paths), "files in", out_dir)
