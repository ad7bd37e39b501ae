import json
import subprocess
import sys

import pytest

from sasakiverify import cli
from sasakiverify import kahler as kh


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def verify(tmp_path, cfg, *extra):
    path = write(tmp_path, "cfg.json", cfg)
    out = tmp_path / "report.json"
    code = cli.main(["verify", "--config", path, "--out", str(out), *extra])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data


def entry(data, name):
    return next(e for e in data["entries"] if e["check"] == name)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


class TestVerify:
    def test_flat_all(self, tmp_path, capsys):
        code, data = verify(tmp_path, {"n": 5, "epsilon": -1, "base": "flat", "checks": "all"})
        assert code == 0 and data["passed"]
        assert data["constants"]["solved"]["beta"] == "315/26752 + 35/6688*r6"
        assert data["constants"]["paper"]["beta"] == data["constants"]["solved"]["beta"]
        assert entry(data, "susy.parallel")["status"] == "pass"
        text = (tmp_path / "report.txt").read_text()
        assert text.rstrip().endswith("PASS")
        assert "0.0245936215606" in capsys.readouterr().out

    def test_riemannian_einstein(self, tmp_path, capsys):
        code, data = verify(tmp_path, {"n": 5, "epsilon": 1, "checks": ["einstein"], "lambda": "solve"})
        assert code == 1
        e = entry(data, "einstein")
        assert e["status"] == "fail"
        assert e["details"]["error"] == "no real λ: metric must be Lorentzian"
        assert "Lorentzian" in capsys.readouterr().out

    def test_random_trace_forms(self, tmp_path):
        code, data = verify(tmp_path, {"base": {"random": {"seed": 7}}, "checks": ["trace_forms"]})
        assert code == 0
        names = [e["check"] for e in data["entries"]]
        assert names == ["trace_forms.TrR2", "trace_forms.TrR4", "trace_forms.pontryagin_identity"]
        assert all(e["residual"] == "0.0" for e in data["entries"])

    def test_deterministic(self, tmp_path):
        cfg = {"base": {"random": {"seed": 2}}, "checks": ["sasaki", "trace_forms"]}
        verify(tmp_path, cfg)
        first = (tmp_path / "report.json").read_bytes()
        verify(tmp_path, cfg)
        assert (tmp_path / "report.json").read_bytes() == first

    def test_dependency_order(self, tmp_path):
        _, data = verify(tmp_path, {"checks": ["einstein", "sasaki"]})
        names = [e["check"] for e in data["entries"]]
        assert names.index("sasaki.structure") < names.index("einstein")

    def test_paper_constants(self, tmp_path):
        code, data = verify(tmp_path, {"checks": ["constants", "susy"], "constants": "paper"})
        assert code == 0
        det = entry(data, "susy.parallel")["details"]
        assert det["paper_constants_residual_by_direction"]["xi"] == 0
        assert det["paper_constants_residual_by_direction"]["1"] > 0.0165

    def test_maxwell_fails_classically_reported(self, tmp_path):
        _, data = verify(tmp_path, {"checks": ["maxwell"]})
        e = entry(data, "maxwell.classical")
        assert e["residual"] == "3/4 + 1/3*r6"
        assert e["details"]["maxwell_satisfied"] is False

    def test_float_backend(self, tmp_path):
        code, data = verify(tmp_path, {"checks": ["sasaki", "gks", "einstein", "trace_forms"]}, "--backend", "float")
        assert code == 0
        assert data["backend"] == "float" and data["field_backend"] == "exact"

    def test_float_tolerance_object(self, tmp_path):
        code, data = verify(tmp_path, {"backend": {"float": {"tolerance": 1e-8}}, "checks": ["sasaki"]})
        assert code == 0 and data["config"]["tolerance"] == 1e-8

    def test_explicit_base(self, tmp_path):
        base = kh.random_kahler_curvature(5)
        bpath = write(tmp_path, "base.json", base.to_json())
        code, data = verify(tmp_path, {"base": {"explicit": {"file": bpath}}, "checks": ["sasaki", "trace_forms"]})
        assert code == 0
        code2, data2 = verify(tmp_path, {"base": {"random": {"seed": 5}}, "checks": ["sasaki", "trace_forms"]})
        assert data["entries"] == data2["entries"]

    def test_nonflat_skips_flat_only(self, tmp_path):
        code, data = verify(tmp_path, {"base": {"random": {"seed": 1}}, "checks": ["gks", "oracles"]})
        names = {e["check"] for e in data["entries"]}
        assert "gks.gamma_trace" in names and "oracles.koszul" not in names


class TestConfigErrors:
    @pytest.mark.parametrize(
        "cfg",
        [
            {"n": 0},
            {"epsilon": 2},
            {"checks": ["nope"]},
            {"unknown": 1},
            {"base": "hyperbolic"},
            {"backend": "quad"},
            {"n": 3, "checks": ["maxwell"]},
            {"base": {"random": {"seed": 1}}, "checks": ["susy"]},
            {"constants": "guess"},
        ],
    )
    def test_exit_two(self, tmp_path, capsys, cfg):
        code, data = verify(tmp_path, cfg)
        assert code == 2 and data is None
        assert capsys.readouterr().err.startswith("error:")

    def test_bad_json(self, tmp_path):
        path = write(tmp_path, "cfg.json", "{not json")
        assert cli.main(["verify", "--config", path]) == 2

    def test_missing_file(self, tmp_path):
        assert cli.main(["verify", "--config", str(tmp_path / "none.json")]) == 2

    def test_bad_explicit_base(self, tmp_path):
        bpath = write(tmp_path, "base.json", {"n": 5, "entries": "garbage"})
        code, _ = verify(tmp_path, {"base": {"explicit": {"file": bpath}}})
        assert code == 2

    def test_usage(self, capsys):
        assert cli.main([]) == 2
        assert cli.main(["table", "bogus"]) == 2


# ---------------------------------------------------------------------------
# table and oracle
# ---------------------------------------------------------------------------


class TestTables:
    def test_eigenvalues(self, capsys):
        assert cli.main(["table", "spinor-eigenvalues"]) == 0
        out = capsys.readouterr().out
        assert "0    1  Phi phi = -(5/2)i phi" in out
        assert "5    1  Phi phi = +(5/2)i phi" in out

    def test_eigenvalues_riemannian(self, capsys):
        cli.main(["table", "spinor-eigenvalues", "--epsilon", "1", "--n", "3"])
        out = capsys.readouterr().out
        assert "0    1  Phi phi = +(3/2)i phi" in out

    def test_constants(self, capsys):
        assert cli.main(["table", "constants"]) == 0
        out = capsys.readouterr().out
        assert "315/26752 + 35/6688*r6" in out
        assert "-17/120 + 7/120*r6" in out and "1199/1200 - 163/400*r6" in out
        assert "0.016590214871619154" in out

    def test_connection_json(self, capsys):
        assert cli.main(["table", "connection", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["kind"] == "connection" and data["n"] == 5
        hit = [e for e in data["entries"] if e["a"] == "e1" and e["b"] == "xi"]
        assert hit[0]["value"] == {"e6": "1"}

    def test_curvature_text(self, capsys):
        assert cli.main(["table", "curvature", "--n", "2"]) == 0
        assert "R(" in capsys.readouterr().out

    def test_json_only_for_tensors(self):
        assert cli.main(["table", "constants", "--json"]) == 2


class TestOracles:
    @pytest.mark.parametrize("kind", ["koszul", "spin-connection"])
    def test_pass(self, capsys, kind):
        assert cli.main(["oracle", kind]) == 0
        assert json.loads(capsys.readouterr().out)["passed"] is True

    def test_trace_direct(self, capsys):
        assert cli.main(["oracle", "trace-direct"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["diffs"]["TrR4.exact"] == 0
        assert data["diffs"]["TrR4.float"] < 1e-6

    def test_spin_connection_random(self, capsys):
        assert cli.main(["oracle", "spin-connection", "--seed", "4"]) == 0


def test_module_entry(tmp_path):
    r = subprocess.run([sys.executable, "-m", "sasakiverify", "table", "spinor-eigenvalues", "--n", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "(1/2)i" in r.stdout
