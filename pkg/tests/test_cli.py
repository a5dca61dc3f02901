import io
import json
import subprocess
import sys

import pytest

from betashift.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    assert err == ""
    return out


class TestExamples:
    def test_dim(self):
        d = json.loads(ok("dim", "--family", "10m1", "--m", "0", "--p", "0.75"))
        assert d["dim"] == pytest.approx(0.99205, abs=1e-4)
        assert d["q"] == pytest.approx(2 / 3)

    def test_admissible(self):
        assert ok("admissible", "--beta-expansion", "1 1", "--word", "0110").strip() == "false"
        assert ok("admissible", "--beta-expansion", "1 1", "--word", "101").strip() == "true"

    def test_shift_measure(self):
        out = ok("measure", "--beta-expansion", "1 1", "--p", "1/2", "--word", "1", "--shift", "1")
        assert out.strip() == "1/4"
        assert ok("measure", "--beta-expansion", "1 1", "--p", "1/3", "--word", "00").strip() == "1/9"

    def test_expand_and_eps1(self):
        assert ok("expand", "--beta-expansion", "11", "--x", "0.5", "--n", "5").strip() == "01001"
        d = json.loads(ok("eps1", "--beta-expansion", "101", "--n", "6"))
        assert d["expansion"] == "101000" and d["quasi"] == "100100" and d["M"] == 3

    def test_full_and_cyl(self):
        assert ok("full", "--beta-expansion", "11", "--word", "10").strip() == "true"
        assert ok("full", "--beta-expansion", "11", "--word", "1").strip() == "false"
        d = json.loads(ok("cyl", "--beta-expansion", "11", "--word", "10"))
        assert d["left"] == pytest.approx(0.618034, abs=1e-6)
        assert d["length"] == pytest.approx(0.381966, abs=1e-6)

    def test_family_shorthand_ones(self):
        d = json.loads(ok("eps1", "--family", "ones", "--m", "3", "--n", "4"))
        assert d["expansion"] == "1110"

    def test_numeric_beta(self):
        d = json.loads(ok("eps1", "--beta", "2", "--n", "4"))
        assert d["expansion"] == "1111"


class TestFormats:
    def test_counts_csv(self):
        out = ok("enumerate", "--beta-expansion", "101", "--n", "5", "--counts", "--format", "csv")
        assert out.splitlines() == ["n,count", "1,2", "2,3", "3,4", "4,6", "5,9"]

    def test_enumerate_words(self):
        assert ok("enumerate", "--beta-expansion", "11", "--n", "3").split() == ["000", "001", "010", "100", "101"]

    def test_mp_csv(self):
        out = ok("mp", "--family", "10m1", "--m", "0", "--p", "1/2", "--target", "0", "--K", "1,10", "--format", "csv")
        lines = out.splitlines()
        assert lines[0] == "K,estimate,half_width"
        assert lines[1] == "1,0.5,0.0"

    def test_mp_json(self):
        d = json.loads(ok("mp", "--family", "10m1", "--m", "1", "--p", "1/2", "--target", "0", "--K", "100"))
        assert d["closed_form"] == "3/4"
        assert abs(d["estimates"][0]["estimate"] - 0.75) < 5e-3

    def test_p_grid(self):
        lines = ok("dim", "--family", "10m1", "--m", "0", "--p-grid", "0.6:0.9:3").splitlines()
        assert lines[0] == "p,q,dim,entropy" and len(lines) == 4
        assert float(lines[2].split(",")[2]) == pytest.approx(0.99205, abs=1e-4)

    def test_markov_json(self):
        d = json.loads(ok("markov", "--family", "10m1", "--m", "0", "--p", "1/2"))
        assert d["pi"] == ["2/3", "1/3"]
        assert d["entropy"] == pytest.approx(0.46209812037329684)

    def test_entropy_gap(self):
        d = json.loads(ok("entropy-gap", "--p", "1/2"))
        assert (d["a"], d["top"], d["b"]) == ("4/7", "1/7", "2/7")
        assert d["gap"] > 0

    def test_report_json(self):
        d = json.loads(ok("measure", "--beta-expansion", "11", "--p", "1/2", "--report", "quasi-bernoulli", "--max-len", "5",
                        "--format", "json"))
        assert d["holds"] is True and {"min_ratio", "max_ratio", "witness_pair", "bound"} <= set(d)


class TestErrors:
    def test_usage(self):
        code, out, err = call("bogus")
        assert code == 1 and out == "" and "usage" in err
        code, _, _ = call("measure", "--beta-expansion", "11", "--word", "1")
        assert code == 1

    def test_domain(self):
        code, out, err = call("measure", "--beta-expansion", "11", "--p", "2", "--word", "1")
        assert code == 2 and out == "" and err
        code, _, _ = call("admissible", "--beta-expansion", "11", "--word", "012")
        assert code == 2
        code, _, _ = call("measure", "--beta-expansion", "11", "--p", "1/2", "--word", "11")
        assert code == 2
        code, _, _ = call("eps1", "--beta-expansion", "1", "--n", "3")
        assert code == 2

    def test_guard(self):
        code, out, err = call("enumerate", "--beta-expansion", "11", "--n", "40")
        assert code == 3 and out == "" and "guard" in err


class TestDeterminism:
    args = ("simulate", "--family", "10m1", "--m", "0", "--p", "0.4", "--law", "walk", "--n", "500", "--streams", "3")

    def test_seed_flag(self):
        assert ok(*self.args, "--seed", "9") == ok(*self.args, "--seed", "9")
        assert ok(*self.args, "--seed", "9") != ok(*self.args, "--seed", "10")

    def test_seed_env(self, monkeypatch):
        monkeypatch.setenv("BETASHIFT_SEED", "9")
        assert ok(*self.args) == ok(*self.args, "--seed", "9")

    def test_output_file_and_localdim(self, tmp_path):
        path = tmp_path / "streams.txt"
        ok(*self.args, "--seed", "2", "--output", str(path))
        rows = path.read_text().split()
        assert len(rows) == 3 and all(len(r) == 500 and "11" not in r for r in rows)
        single = tmp_path / "one.txt"
        single.write_text(rows[0] + "\n")
        out = ok("localdim", "--family", "10m1", "--m", "0", "--p", "0.4", "--depths", "10,500",
                 "--stream-file", str(single))
        assert out.splitlines()[0] == "n,ratio" and len(out.splitlines()) == 3
        again = ok("localdim", "--family", "10m1", "--m", "0", "--p", "0.4", "--law", "walk", "--depths", "10,500",
                   "--seed", "2", "--stream-id", "0")
        assert again == out


class TestVerify:
    def test_combinatorics(self):
        code, out, _ = call("verify", "--suite", "combinatorics")
        assert code == 0 and "FAIL" not in out

    def test_markov(self):
        code, out, _ = call("verify", "--suite", "markov", "--m", "1", "--p", "2/5")
        assert code == 0 and "FAIL" not in out and "Markov condition" in out

    def test_dimension_reports_threshold(self):
        code, out, _ = call("verify", "--suite", "dimension", "--grid", "25")
        failing = [line for line in out.splitlines() if line.startswith("FAIL")]
        # the 1e-6 gap threshold is not met near p = 1; everything else passes
        assert code == 1
        assert len(failing) == 1 and "exceeds 1e-6" in failing[0]
        assert "PASS  [1 0^0 1] Markov entropy equals dim * log(beta)" in out
        assert "is below the entropy bound" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "betashift", "admissible", "--beta-expansion", "11", "--word", "0110"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "false"
