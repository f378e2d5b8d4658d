import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from maglab import cli
from maglab import config as cfgmod
from maglab.errors import ConfigError

CONFIGS = sorted((Path(__file__).resolve().parents[1] / "configs").glob("*.json"))
FAST_CONFIGS = [p for p in CONFIGS if "extremal" not in p.name]


def run_main(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, doc, name="c.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


class TestSchema:
    @pytest.mark.parametrize("path", CONFIGS, ids=lambda p: p.stem)
    def test_examples_validate(self, path):
        cfgmod.load(path)

    @pytest.mark.parametrize(
        "doc,where",
        [
            ({"operation": "delay"}, "invalid config at"),
            ({"operation": "fly", "spacetime": {"kind": "schwarzschild", "rg": 1}}, "operation"),
            ({"operation": "delay", "spacetime": {"kind": "schwarzschild", "rg": 1, "spin": 2}, "parameters": {"radius": 10}}, "spacetime"),
            ({"operation": "delay", "spacetime": {"kind": "schwarzschild", "rg": 1}, "parameters": {"radius": {"value": 1, "unit": "furlong"}}}, "parameters/radius"),
            ({"operation": "delay", "spacetime": {"kind": "schwarzschild"}, "parameters": {"radius": 10}}, "spacetime"),
            ({"operation": "tidal", "spacetime": {"kind": "schwarzschild", "rg": 1}}, "spacetime/kind"),
            ({"operation": "closure", "spacetime": {"kind": "random"}, "parameters": {"a": [1, 0], "b": [0, 1]}}, "spacetime"),
        ],
    )
    def test_rejects(self, doc, where):
        with pytest.raises(ConfigError, match=where):
            cfgmod.validate(doc)

    def test_quantity(self):
        assert cfgmod.quantity({"value": 2, "unit": "km"}) == 2e5
        assert cfgmod.quantity(3) == 3.0
        assert cfgmod.quantity(None) is None

    def test_unreadable(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            cfgmod.load(tmp_path / "missing.json")
        with pytest.raises(ConfigError, match="not valid JSON"):
            cfgmod.load(write(tmp_path, "{"))


class TestResultDocument:
    def test_units_and_nonfinite(self):
        doc = cfgmod.result_document("x", {}, {"a": (1.5, "s"), "b": (float("inf"), "1"), "c": (None, "1")})
        assert doc["outputs"]["a"] == {"value": 1.5, "unit": "s"}
        assert doc["outputs"]["b"]["value"] is None and doc["outputs"]["c"]["value"] is None
        assert doc["provenance"]["constants"]["c"]["unit"] == "cm/s"

    def test_dumps_is_canonical(self):
        text = cfgmod.dumps({"b": 1, "a": [1.0]})
        assert text.endswith("\n") and text.index('"a"') < text.index('"b"')


class TestRun:
    @pytest.mark.parametrize("path", FAST_CONFIGS, ids=lambda p: p.stem)
    def test_examples_run_reproducibly(self, path, capsys):
        code, first, _ = run_main(["run", str(path)], capsys)
        assert code == 0
        _, second, _ = run_main(["run", str(path)], capsys)
        assert first == second
        doc = json.loads(first)
        assert all("unit" in v for v in doc["outputs"].values())

    def test_mercury_delay(self, capsys):
        path = next(p for p in CONFIGS if p.stem == "delay_mercury")
        _, out, _ = run_main(["run", str(path)], capsys)
        doc = json.loads(out)
        assert doc["outputs"]["delta_t"]["value"] == pytest.approx(0.14536, rel=5e-3)
        assert doc["outputs"]["delta_t"]["unit"] == "s"

    def test_csv_and_out_file(self, tmp_path, capsys):
        path = next(p for p in CONFIGS if p.stem == "redshift_photon")
        out = tmp_path / "result.csv"
        code, stdout, _ = run_main(["run", str(path), "--format", "csv", "--out", str(out)], capsys)
        assert code == 0 and stdout == ""
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert {"name", "value", "unit"} <= set(rows[0])

    def test_config_error_exit(self, tmp_path, capsys):
        code, _, err = run_main(["run", write(tmp_path, {"operation": "delay"})], capsys)
        assert code == cli.EXIT_USAGE and "invalid config" in err

    def test_numeric_error_exit(self, tmp_path, capsys):
        doc = {"operation": "delay", "spacetime": {"kind": "schwarzschild", "mass": 1e33}, "parameters": {"radius": 1e3, "period": 1}}
        code, _, err = run_main(["run", write(tmp_path, doc)], capsys)
        assert code == cli.EXIT_NUMERIC and "inside rg" in err

    def test_closure_dimension_mismatch(self, tmp_path, capsys):
        doc = {"operation": "closure", "spacetime": {"kind": "constant-torsion", "dim": 3, "components": [[0, 1, 2, 0.5]]}, "parameters": {"a": [1, 0], "b": [0, 1]}}
        code, _, _ = run_main(["run", write(tmp_path, doc)], capsys)
        assert code == cli.EXIT_USAGE


class TestTable:
    @pytest.mark.parametrize("fmt", ["human", "json", "csv"])
    def test_formats(self, fmt, capsys):
        code, out, _ = run_main(["table", "7.3.1", "--format", fmt], capsys)
        assert code == 0
        assert "Earth" in out
        if fmt == "json":
            doc = json.loads(out)
            earth = next(r for r in doc["comparison"] if r["row"] == "Earth")
            assert abs(earth["rel_delta"]) <= 5e-3
        if fmt == "csv":
            assert out.splitlines()[0] == "row,quantity,unit,computed,reference,rel_delta"

    def test_unknown(self, capsys):
        code, _, err = run_main(["table", "9.9"], capsys)
        assert code == cli.EXIT_USAGE and "unknown table" in err


class TestVerifyCommand:
    def test_json_deterministic(self, capsys):
        _, a, _ = run_main(["verify", "frames", "--seed", "7", "--format", "json"], capsys)
        _, b, _ = run_main(["verify", "frames", "--seed", "7", "--format", "json"], capsys)
        assert a == b and json.loads(a)["passed"]

    def test_failure_exit_code(self, capsys):
        code, out, _ = run_main(["verify", "frames", "--tol", "1e-300"], capsys)
        assert code == cli.EXIT_VERIFY_FAILED and "FAIL" in out

    def test_bad_suite_is_usage_error(self):
        with pytest.raises(SystemExit) as info:
            cli.main(["verify", "nothing"])
        assert info.value.code == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "maglab.cli", "table", "7.3.2", "--format", "csv"], capture_output=True, text=True)
    assert out.returncode == 0 and "Moon" in out.stdout
