import csv
import io
import os

from rigmatch.bench import COLUMNS, read_workload, run_bench, run_synthetic
from rigmatch.mjoin import EnumLimits

from conftest import FIG2_GRAPH, FIG2_QUERY


def test_workload_csv(tmp_path):
    wl = tmp_path / "w.txt"
    wl.write_text(f"# comment\n{FIG2_GRAPH} {FIG2_QUERY} missing.txt\nnowhere.txt q.txt\n")
    pairs = read_workload(str(wl))
    assert pairs[0][1][1] == os.path.join(str(tmp_path), "missing.txt")
    buf = io.StringIO()
    run_bench(pairs, buf, EnumLimits(100, 10))
    rows = list(csv.reader(io.StringIO(buf.getvalue())))
    assert rows[0] == COLUMNS
    fig = dict(zip(COLUMNS, rows[1]))
    assert fig["matches"] == "4" and fig["completed"] == "true"
    assert (fig["rig_nodes"], fig["rig_edges"]) == ("7", "11")
    assert rows[2][-1] == "error" and rows[3][-1] == "error"


def test_synthetic_small():
    buf = io.StringIO()
    rows = run_synthetic(buf, seed=1, nodes=3000, edges=12000, labels=5,
                         limits=EnumLimits(1000, 10))
    assert len(rows) == 14 * 3
    assert all(r.completed in ("true", "false") for r in rows)
    assert buf.getvalue().count("\n") == len(rows) + 1
