"""End-to-end command tests: config in, report + exit code out."""

import json

import pytest

from soladic.cli import main


def write_config(tmp_path, doc, name="run.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


GAUSS_HOLDS = {
    "solenoid": {"2": "inf"},
    "coefficients": ["1/2", "1/2", "1/2", "1/2"],
    "distribution": {"law": {"kind": "gaussian", "sigma": 1}},
}


class TestClassify:
    @pytest.mark.parametrize(
        "table,kind",
        [
            ({"2": "inf"}, "unique_infinite_prime"),
            ({}, "no_infinite_prime"),
            ({"2": "inf", "3": "inf"}, "multiple_infinite_primes"),
        ],
    )
    def test_classes(self, tmp_path, capsys, table, kind):
        path = write_config(tmp_path, {"solenoid": table})
        code, out, _ = run_cli(capsys, "classify", path)
        assert code == 0
        assert json.loads(out)["class"] == kind

    def test_unknown_key_is_exit_2(self, tmp_path, capsys):
        path = write_config(tmp_path, {"solenoid": {}, "oops": 1})
        code, _, err = run_cli(capsys, "classify", path)
        assert code == 2
        assert "unknown keys" in err

    def test_missing_file_is_exit_2(self, tmp_path, capsys):
        code, _, err = run_cli(capsys, "classify", tmp_path / "absent.json")
        assert code == 2
        assert "cannot read" in err

    def test_invalid_json_is_exit_2(self, tmp_path, capsys):
        path = tmp_path / "run.json"
        path.write_text("{not json")
        code, _, _ = run_cli(capsys, "classify", path)
        assert code == 2


class TestCheck:
    def test_holds_exits_0(self, tmp_path, capsys):
        path = write_config(tmp_path, GAUSS_HOLDS)
        code, out, _ = run_cli(capsys, "check", path)
        doc = json.loads(out)
        assert code == 0
        assert doc["equation"]["verdict"] == "holds"
        assert doc["decomposition"]["kind"] == "gaussian_haar"

    def test_fails_exits_1_with_witness(self, tmp_path, capsys):
        path = write_config(tmp_path, dict(GAUSS_HOLDS, coefficients=["1/2"] * 3))
        code, out, _ = run_cli(capsys, "check", path)
        doc = json.loads(out)
        assert code == 1
        assert doc["equation"]["verdict"] == "fails"
        assert doc["equation"]["witness"] is not None

    def test_explicit_cf_distribution(self, tmp_path, capsys):
        path = write_config(
            tmp_path,
            {
                "solenoid": {"2": "inf", "3": "inf"},
                "coefficients": ["2/3", "2/3", "1/3"],
                "distribution": {
                    "cf": [{"stratum": [{"prime": 2, "op": ">=", "k": -1}], "terms": [{"c": "1"}]}]
                },
            },
        )
        code, out, _ = run_cli(capsys, "check", path)
        doc = json.loads(out)
        assert code == 0
        assert doc["decomposition"]["kind"] == "gaussian_haar"
        assert doc["decomposition"]["subgroup"] == {"2": -1}

    def test_undecidable_exits_3(self, tmp_path, capsys):
        # a pure character whose phase denominator exceeds the exact-arithmetic
        # working cap: the two sides differ formally but no probe can prove it
        path = write_config(
            tmp_path,
            {
                "solenoid": {"2": "inf"},
                "coefficients": ["1/2", "1/2", "1/2"],
                "distribution": {
                    "cf": [{"stratum": [], "terms": [{"c": "1", "shift": f"1/{2**40}"}]}]
                },
            },
        )
        code, out, _ = run_cli(capsys, "check", path)
        assert code == 3
        assert json.loads(out)["equation"]["verdict"] == "unknown"

    def test_csv_format(self, tmp_path, capsys):
        path = write_config(tmp_path, GAUSS_HOLDS)
        code, out, _ = run_cli(capsys, "check", path, "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "key,value"
        assert any(line.startswith("equation.verdict,holds") for line in lines)


class TestSimulate:
    CONFIG = {
        "solenoid": {"2": "inf"},
        "coefficients": ["1/2", "1/2", "1/2", "1/2"],
        "distribution": {"law": {"kind": "haar", "subgroup": "zero"}},
        "simulation": {"n": 3000, "depth": 2, "seed": 5},
    }

    def test_consistent_run_writes_artifacts(self, tmp_path, capsys):
        path = write_config(tmp_path, self.CONFIG)
        code, out, _ = run_cli(capsys, "simulate", path)
        doc = json.loads(out)
        assert code == 0
        assert doc["verdict"] == "consistent"
        ref = (tmp_path / doc["artifacts"]["reference"]).read_text()
        comb = (tmp_path / doc["artifacts"]["combined"]).read_text()
        for text in (ref, comb):
            lines = text.splitlines()
            assert lines[0] == "depth,coord"
            assert len(lines) == 3001

    def test_report_is_byte_stable(self, tmp_path, capsys):
        path = write_config(tmp_path, self.CONFIG)
        _, first, _ = run_cli(capsys, "simulate", path)
        _, second, _ = run_cli(capsys, "simulate", path)
        assert first == second

    def test_inconsistent_exits_1(self, tmp_path, capsys):
        broken = dict(
            self.CONFIG,
            distribution={"law": {"kind": "gaussian", "sigma": 1, "mean": "1/8"}},
            simulation={"n": 20000, "depth": 3, "seed": 1},
        )
        path = write_config(tmp_path, broken)
        code, out, _ = run_cli(capsys, "simulate", path)
        assert code == 1
        assert json.loads(out)["verdict"] == "inconsistent"

    def test_seed_precedence(self, tmp_path, capsys, monkeypatch):
        path = write_config(tmp_path, self.CONFIG)
        monkeypatch.setenv("SOLADIC_SEED", "7")
        _, out, _ = run_cli(capsys, "simulate", path, "--seed", "9")
        assert json.loads(out)["seed"] == 9
        _, out, _ = run_cli(capsys, "simulate", path)
        assert json.loads(out)["seed"] == 7
        monkeypatch.delenv("SOLADIC_SEED")
        _, out, _ = run_cli(capsys, "simulate", path)
        assert json.loads(out)["seed"] == 5

    def test_flags_override_config(self, tmp_path, capsys):
        path = write_config(tmp_path, self.CONFIG)
        _, out, _ = run_cli(capsys, "simulate", path, "--n", "1000", "--depth", "1", "--alpha", "0.05")
        doc = json.loads(out)
        assert doc["n"] == 1000 and doc["depth"] == 1 and doc["alpha"] == 0.05

    def test_cf_distribution_is_rejected(self, tmp_path, capsys):
        bad = dict(self.CONFIG, distribution={"cf": [{"stratum": [], "terms": [{"c": "1"}]}]})
        path = write_config(tmp_path, bad)
        code, _, err = run_cli(capsys, "simulate", path)
        assert code == 2
        assert "sampling law" in err

    def test_bad_simulation_numbers(self, tmp_path, capsys):
        for patch in ({"n": 0}, {"depth": -1}, {"alpha": 2}):
            cfg = dict(self.CONFIG, simulation={**self.CONFIG["simulation"], **patch})
            path = write_config(tmp_path, cfg)
            code, _, _ = run_cli(capsys, "simulate", path)
            assert code == 2


class TestSolveCoeffs:
    def test_depth_two_table(self, tmp_path, capsys):
        path = write_config(tmp_path, {"p": 2, "l": 2})
        code, out, _ = run_cli(capsys, "solve-coeffs", path)
        doc = json.loads(out)
        assert code == 0
        assert doc["count"] == 5
        assert doc["solutions"] == [[0, 16], [1, 12], [2, 8], [3, 4], [4, 0]]

    def test_depth_one_is_singleton(self, tmp_path, capsys):
        path = write_config(tmp_path, {"p": 3, "l": 1})
        _, out, _ = run_cli(capsys, "solve-coeffs", path)
        assert json.loads(out)["solutions"] == [[9]]

    def test_composite_p_is_config_error(self, tmp_path, capsys):
        path = write_config(tmp_path, {"p": 4, "l": 1})
        code, _, _ = run_cli(capsys, "solve-coeffs", path)
        assert code == 2


class TestCounterexample:
    def test_bundle_file_and_report(self, tmp_path, capsys):
        path = write_config(tmp_path, {"p": 2, "q": 3, "c": "1/2"})
        code, out, _ = run_cli(capsys, "counterexample", path)
        doc = json.loads(out)
        assert code == 0
        assert doc["coefficients"] == ["2/3", "2/3", "1/3"]
        assert doc["equation"]["verdict"] == "holds"
        assert doc["decomposition"]["kind"] == "not_of_form"
        bundle = json.loads((tmp_path / doc["bundle"]).read_text())
        assert bundle["law"]["kind"] == "mixture"
        assert bundle["mixing_weight"] == "1/2"

    def test_blurred_variant(self, tmp_path, capsys):
        path = write_config(tmp_path, {"p": 2, "q": 3, "c": "1/4", "sigma": "1"})
        code, out, _ = run_cli(capsys, "counterexample", path)
        doc = json.loads(out)
        assert code == 0
        assert doc["law"]["kind"] == "convolution"
        assert doc["sigma"] == "1"

    def test_out_of_range_weight_is_exit_2(self, tmp_path, capsys):
        path = write_config(tmp_path, {"p": 2, "q": 3, "c": "3/2"})
        code, _, _ = run_cli(capsys, "counterexample", path)
        assert code == 2

    def test_equal_primes_is_exit_2(self, tmp_path, capsys):
        path = write_config(tmp_path, {"p": 3, "q": 3, "c": "1/2"})
        code, _, _ = run_cli(capsys, "counterexample", path)
        assert code == 2
