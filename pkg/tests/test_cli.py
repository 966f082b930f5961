"""End-to-end tests for the bincorr command line."""

import json

import numpy as np
import pytest

from bincorr.cli import EXIT_ERROR, main, parse_pair, parse_vector, parse_vectors
from bincorr.errors import ParseError
from tests.conftest import CHEN_C


@pytest.fixture
def gen(tmp_path, capsys):
    """Write a state file with `bincorr gen` and return its path."""

    def _gen(kind: str, *extra: str):
        path = tmp_path / f"{kind}.json"
        assert main(["gen", "--kind", kind, "--out", str(path), *extra]) == 0
        capsys.readouterr()
        return path

    return _gen


class TestArgumentParsing:
    def test_vector(self):
        np.testing.assert_array_equal(parse_vector("1,0,-0.5"), [1.0, 0.0, -0.5])

    @pytest.mark.parametrize("text", ["1,2", "a,b,c", ""])
    def test_bad_vector(self, text):
        with pytest.raises(ParseError):
            parse_vector(text)

    def test_vectors(self):
        assert len(parse_vectors("1,0,0;0,1,0;0,0,1")) == 3

    def test_pair(self):
        pair = parse_pair("0,0,1|1,0,0")
        np.testing.assert_array_equal(pair.y, [1.0, 0.0, 0.0])

    def test_bad_pair(self):
        with pytest.raises(ParseError):
            parse_pair("0,0,1")


class TestAnalyze:
    def test_chen_json(self, gen, capsys):
        path = gen("chen")
        assert main(["analyze", str(path), "--json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        np.testing.assert_allclose(doc["correlation"]["C"], CHEN_C, atol=1e-12)
        assert doc["correlation"]["rank"] == 3
        assert doc["label"] == "chen"

    def test_text(self, gen, capsys):
        assert main(["analyze", str(gen("bell-psim"))]) == 0
        assert "rank = 3" in capsys.readouterr().out

    def test_json_output_reads_back(self, gen, tmp_path, capsys):
        path = gen("sep-mixed", "--seed", "4")
        original = json.loads(path.read_text())
        main(["analyze", str(path), "--json"])
        report = tmp_path / "report.json"
        report.write_text(capsys.readouterr().out)

        main(["analyze", str(report), "--json"])
        again = json.loads(capsys.readouterr().out)
        diff = np.array(again["matrix"]) - np.array(original["matrix"])
        assert np.max(np.abs(diff)) < 1e-12


class TestDetect:
    def test_singlet_is_entangled(self, gen, capsys):
        assert main(["detect", str(gen("bell-psim")), "--exact"]) == 1
        assert "measurements_used: 3" in capsys.readouterr().out

    def test_werner_is_indeterminate(self, gen):
        assert main(["detect", str(gen("werner", "--xi", "0.2"))]) == 2

    def test_product_with_shots(self, gen):
        path = gen("product", "--seed", "7")
        assert main(["detect", str(path), "--shots", "100000", "--seed", "7"]) == 0

    def test_exit_codes_repeatable(self, gen):
        path = gen("haar", "--seed", "3")
        codes = {main(["detect", str(path), "--shots", "2000", "--seed", "1"]) for _ in range(3)}
        assert len(codes) == 1

    def test_json_trace(self, gen, capsys):
        assert main(["detect", str(gen("chen")), "--json"]) == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["protocol"]["trace"]["measurements_used"] == 1

    def test_custom_probes(self, gen):
        path = gen("bell-psim")
        assert main(["detect", str(path), "--y", "1,0,0", "--xs", "0,1,0;0,0,1;1,0,0"]) == 1

    @pytest.mark.parametrize("flag", [["--seed", "3"], ["--z", "4"], ["--mode", "independent"]])
    def test_shot_options_require_shots(self, gen, flag):
        with pytest.raises(SystemExit) as e:
            main(["detect", str(gen("chen")), *flag])
        assert e.value.code == EXIT_ERROR

    def test_bad_vector_is_an_error(self, gen, capsys):
        assert main(["detect", str(gen("chen")), "--y", "1,2"]) == EXIT_ERROR
        assert "Error:" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["detect", str(tmp_path / "nope.json")]) == EXIT_ERROR

    def test_exact_and_shots_conflict(self, gen):
        with pytest.raises(SystemExit) as e:
            main(["detect", str(gen("chen")), "--exact", "--shots", "1000"])
        assert e.value.code == EXIT_ERROR


class TestSweepWerner:
    def test_json_rows(self, capsys):
        assert main(["sweep-werner", "--json"]) == 0
        rows = json.loads(capsys.readouterr().out)["rows"]
        assert len(rows) == 11
        by_xi = {round(r["xi"], 1): r for r in rows}
        assert by_xi[0.3]["ppt_separable"] is True
        assert by_xi[0.4]["ppt_separable"] is False
        for r in rows:
            assert abs(r["covariance"] - r["reference"]) < 1e-12

    def test_text_table(self, capsys):
        assert main(["sweep-werner", "--steps", "3", "--pair", "1,0,0|0,0,1"]) == 0
        out = capsys.readouterr().out
        assert "PPT" in out

    def test_bad_pair(self):
        assert main(["sweep-werner", "--pair", "1,0,0"]) == EXIT_ERROR


class TestGen:
    def test_werner_label(self, tmp_path, capsys):
        path = tmp_path / "w.json"
        assert main(["gen", "--kind", "werner", "--xi", "0.2", "--out", str(path)]) == 0
        assert json.loads(path.read_text())["label"] == "werner-0.2"

    def test_werner_requires_xi(self, tmp_path):
        with pytest.raises(SystemExit) as e:
            main(["gen", "--kind", "werner", "--out", str(tmp_path / "w.json")])
        assert e.value.code == EXIT_ERROR

    def test_werner_xi_out_of_range(self, tmp_path):
        out = str(tmp_path / "w.json")
        assert main(["gen", "--kind", "werner", "--xi", "1.5", "--out", out]) == EXIT_ERROR

    def test_seeded_output_is_stable(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["gen", "--kind", "haar", "--seed", "5", "--out", str(a)])
        main(["gen", "--kind", "haar", "--seed", "5", "--out", str(b)])
        assert a.read_text() == b.read_text()


class TestVerify:
    def test_too_few_trials(self):
        with pytest.raises(SystemExit) as e:
            main(["verify", "--trials", "50"])
        assert e.value.code == EXIT_ERROR
