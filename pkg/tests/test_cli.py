import csv
import io
import json
import subprocess
import sys

import pytest

from svoachar import QSeries
from svoachar.cli import run
from svoachar.modchar import mckay_thompson
from test_monster import GOOD


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_expand_text():
    code, text = call("expand", "mckay-thompson", "--class", "2A", "--terms", "4")
    assert code == 0
    assert text.startswith("q^-1 + 4372*q + 96256*q^2 + 1240002*q^3")


def test_expand_json_round_trip():
    code, text = call("expand", "mckay-thompson", "--class", "2B", "--terms", "3", "--format", "json")
    assert code == 0
    series = QSeries.from_json_dict(json.loads(text))
    assert series.agrees_with(mckay_thompson("2B", 48 * 3 + 1))
    assert series.prec_tick == -48 + 48 * 3 + 1


def test_expand_honours_env(monkeypatch):
    monkeypatch.setenv("SVOA_TERMS", "2")
    code, text = call("expand", "j", "--format", "json")
    assert code == 0 and json.loads(text)["prec_tick"] == -48 + 97


def test_deterministic_output():
    assert call("solve", "--c", "67/2", "--mu", "1.5", "--format", "json") == \
        call("solve", "--c", "67/2", "--mu", "1.5", "--format", "json")


def test_solve_certificate_text():
    code, text = call("solve", "--c", "33.5", "--mu", "3/2")
    assert code == 0
    assert "Infeasible" in text and "a4 = 0 mod 32768" in text and "not integral" in text


def test_table_csv():
    code, text = call("table", "--from", "23", "--to", "24")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [(r["c"], r["mu_upper"]) for r in rows] == [("23", "1"), ("47/2", "3/2"), ("24", "2")]


def test_verify_exit_codes():
    assert call("verify", "maxodd", "--c", "48")[0] == 0
    assert call("verify", "noneighbour")[0] == 0
    assert call("verify", "newbound", "--c", "48")[0] == 0
    code, text = call("verify", "coeffpos", "--c", "2", "--n", "50")
    assert code == 1
    assert json.loads(text.strip().splitlines()[-1])["status"] == "failed"


def test_verify_n1_at_47_2_reports_the_primary_count():
    code, text = call("verify", "n1", "--c", "47/2", "--format", "json")
    assert code == 1
    payload = json.loads(text.split("\n{\"status\"")[0])
    assert payload["values"]["primary_3_2"] == "4370"


def test_usage_errors():
    assert call("expand", "virasoro-vacuum")[0] == 2
    assert call("solve", "--c", "1/3", "--mu", "1")[0] == 2
    assert call("solve", "--c", "48", "--mu", "1/3")[0] == 2
    assert call("bogus")[0] == 2
    assert call("verify", "maxodd", "--c", "36")[0] == 2


def test_monster_obstruction_json():
    code, text = call("monster", "obstruction", "--class", "2A", "--format", "json")
    assert code == 0
    assert json.loads(text)["contradiction"] is True


def test_check_decomposition_builtin_and_file(tmp_path):
    assert call("monster", "check-decomposition", "--builtin", "Vprime")[0] == 0
    p = tmp_path / "dec.json"
    p.write_text(json.dumps({"entries": [{"degree": "5/2", "irreps": {"1": 1, "2": 2}}]}))
    code, _ = call("monster", "check-decomposition", "--input", str(p))
    assert code == 1


def test_bad_monster_data_exit_2(tmp_path):
    p = tmp_path / "m.csv"
    p.write_text(GOOD.replace("2,196883,", "2,196882,"))
    assert call("monster", "check-decomposition", "--data", str(p))[0] == 2
    p.write_text(GOOD)
    assert call("monster", "check-decomposition", "--data", str(p))[0] == 0


def test_console_entry_point():
    argv = ["expand", "mckay-thompson", "--class", "2B", "--terms", "3"]
    proc = subprocess.run([sys.executable, "-m", "svoachar.cli", *argv], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("q^-1 + 276*q - 2048*q^2")


@pytest.mark.parametrize("argv", [["--help"], ["expand", "--help"]])
def test_help_exits_zero(argv, capsys):
    assert run(argv) == 0
