import json
import subprocess
import sys

import pytest

from etacurves.cli import main
from etacurves.forms import form
from etacurves.qseries import TruncSeries


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_levels(capsys):
    code, out, _ = run(capsys, "levels", "20", "--json")
    rows = json.loads(out)
    assert code == 0
    assert [(r["N"], r["k"], r["h"], r["mu"]) for r in rows] == [
        (1, 12, 1, 1), (2, 8, 1, 3), (3, 6, 1, 4), (5, 4, 1, 6),
        (6, 4, 1, 12), (11, 2, 1, 12), (14, 2, 1, 24), (15, 2, 1, 24),
    ]
    assert len(json.loads(run(capsys, "levels", "1", "--json")[1])) == 1
    assert json.loads(run(capsys, "levels", "0", "--json")[1]) == []


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "j5", "--prec", "5")
    assert code == 0 and out.strip() == "q^-1 - 6 + 9*q + 10*q^2 - 30*q^3 + 6*q^4 + O(q^5)"
    assert run(capsys, "expand", "Delta.N1", "--prec", "3")[1].strip() == "q - 24*q^2 + O(q^3)"
    assert run(capsys, "expand", "E4.N1", "--prec", "2")[1].strip() == "1 + 240*q + O(q^2)"
    _, out, _ = run(capsys, "expand", "E4.N5.cusp0", "--prec", "8", "--json")
    assert TruncSeries.from_json_obj(json.loads(out)["series"]) == form("E4.N5.cusp0", 8)
    code, _, err = run(capsys, "expand", "bogus")
    assert code == 2 and "unknown form" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "all", "--json")
    reports = json.loads(out)
    assert code == 0 and len(reports) == 25 and all(r["ok"] for r in reports)
    code, out, _ = run(capsys, "verify", "G0.5", "--json")
    assert code == 0 and [r["candidate"] for r in json.loads(out)] == ["E4.N5.cuspinf", "E4.N5.cusp0"]
    assert run(capsys, "verify", "G9.9")[0] == 2
    assert run(capsys, "verify", "G0.6", "--prec", "5")[0] == 2


def test_curve(capsys):
    code, out, _ = run(capsys, "curve", "G0.1", "--json")
    (rep,) = json.loads(out)
    assert code == 0 and rep["minimal"] == [0, 0, 0, 0, -27] and rep["conductor"] == 36
    assert json.loads(run(capsys, "curve", "G0sharp.6", "--json")[1])[0]["conductor"] == 48
    assert json.loads(run(capsys, "curve", "G0.7", "--json")[1])[0]["conductor"] == 336


def test_modularity(capsys):
    code, out, _ = run(capsys, "modularity", "all", "--json")
    reports = json.loads(out)
    assert code == 0 and len(reports) == 12 and all(not r["mismatches"] for r in reports)
    assert run(capsys, "modularity", "G0.11")[0] == 0
    code, out, _ = run(capsys, "modularity", "G0.11", "--pmax", "1", "--json")
    assert code == 0 and json.loads(out)[0]["matches"] == 0
    assert run(capsys, "modularity", "G0.7")[0] == 2


def test_solve(capsys):
    code, out, _ = run(capsys, "solve", "G0.3", "--prec", "10", "--json")
    (res,) = json.loads(out)
    new = [s for s in res["solutions"] if s["label"] is None]
    assert code == 0 and len(new) == 1
    assert TruncSeries.from_json_obj(new[0]["series"])[1] == -27
    _, out, _ = run(capsys, "solve", "G0.6", "--prec", "10", "--json")
    assert all(s["label"] for s in json.loads(out)[0]["solutions"])
    assert run(capsys, "solve", "G0.1", "--prec", "4")[0] == 2


def test_identity(capsys):
    for name in ("classical", "sharp3", "j5closed"):
        code, out, _ = run(capsys, "identity", name)
        assert code == 0 and "pass" in out


def test_out_file_and_determinism(capsys, tmp_path):
    p = tmp_path / "c.json"
    assert main(["curve", "all", "--json", "--out", str(p)]) == 0
    first = p.read_text()
    main(["curve", "all", "--json", "--out", str(p)])
    assert p.read_text() == first
    assert [r["group"] for r in json.loads(first)][:2] == ["G0.1", "G0.2"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "etacurves", "levels", "5"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.splitlines()[1].split() == ["1", "12", "1", "1"]


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
