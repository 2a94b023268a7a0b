"""
Tests de la ligne de commande (click.testing.CliRunner, Celery en eager).

Usage:
    pytest tests/test_cli.py -v -s
    pytest tests/test_cli.py -v -s -m slow      # run --task all complet
"""
import json

import pytest
from click.testing import CliRunner

from app.cli.main import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from app.cli.reports import ClaimResult, RunReport
from app.cli.runner import RunConfig, Runner, Task, run


@pytest.fixture
def cli():
    return CliRunner()


def _json(result) -> dict:
    return json.loads(result.stdout)


class TestConfigErrors:
    """Configuration invalide: code 2, aucun rapport sur stdout."""

    @pytest.mark.parametrize("args", [
        ["--window", "0"],
        ["--type", "X9", "--task", "build"],
        ["--type", "A9", "--task", "build"],
        ["--degrees", "5", "--task", "derive"],
        ["--degrees", "1,a", "--task", "derive"],
        ["--task", "bider", "--window", "2"],
        ["--margin", "0"],
        ["--task", "nope"],
    ])
    def test_exit_code(self, cli, args):
        result = cli.invoke(main, args)
        assert result.exit_code == EXIT_CONFIG, result.output
        assert "claims passed" not in result.stdout

    def test_bad_cartan_file(self, cli, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2\n2 1\n1 2\n")
        result = cli.invoke(main, ["--cartan-file", str(path), "--task", "build"])
        assert result.exit_code == EXIT_CONFIG
        assert "Error:" in result.stderr

    def test_missing_cartan_file(self, cli, tmp_path):
        result = cli.invoke(main, ["--cartan-file", str(tmp_path / "absent.txt")])
        assert result.exit_code == EXIT_CONFIG


class TestTasks:
    def test_center_json(self, cli):
        result = cli.invoke(main, ["--task", "center", "--format", "json"])
        assert result.exit_code == EXIT_OK, result.output
        data = _json(result)
        assert data["schema_version"] == 1
        assert data["center_dim"] == 2
        assert data["basis"] == ["K1", "K2"]
        assert data["center"] == {"selector": "full", "N": 4, "center_dim": 2, "basis": ["K1", "K2"]}
        report = RunReport.model_validate_json(result.stdout)
        assert report.model_dump_json(indent=2) == result.stdout.strip()
        print(f"\n✓ centre: {data['basis']}")

    def test_center_keys_absent_elsewhere(self, cli):
        data = _json(cli.invoke(main, ["--task", "build", "--format", "json"]))
        assert data["center_dim"] is None and data["basis"] is None

    @pytest.mark.parametrize("selector, basis", [("vir", ["K2"]), ("gtilde", ["K1"]), ("quotient", [])])
    def test_center_selectors(self, cli, selector, basis):
        result = cli.invoke(main, ["--task", "center", "--selector", selector, "--format", "json"])
        assert result.exit_code == EXIT_OK
        assert _json(result)["center"]["basis"] == basis

    def test_build_text(self, cli):
        result = cli.invoke(main, ["--task", "build"])
        assert result.exit_code == EXIT_OK, result.output
        lines = result.stdout.strip().splitlines()
        assert lines[0].startswith("affvir A1 N=4 task=build")
        assert lines[-1] == f"{len(lines) - 2}/{len(lines) - 2} claims passed"
        assert any("[PASS] virasoro-bracket" in line for line in lines)

    def test_build_json_algebra(self, cli):
        data = _json(cli.invoke(main, ["--task", "build", "--type", "A2", "--format", "json"]))
        assert data["algebra"]["dim"] == 8
        assert data["algebra"]["killing_determinant"] == "-5038848"
        assert data["algebra"]["dual_coxeter"] == "3"
        assert data["algebra"]["graded_dims"]["0"] == 11

    def test_normalized_form(self, cli):
        data = _json(cli.invoke(main, ["--task", "build", "--normalize-form", "--format", "json"]))
        assert data["algebra"]["normalized_form"] is True
        central = next(c for c in data["claims"] if c["anchor"] == "loop-central-term")
        assert central["passed"]
        assert central["detail"].startswith("(e,f)=1;")

    def test_jacobi_a2(self, cli):
        result = cli.invoke(main, ["--task", "jacobi", "--type", "A2", "--format", "json"])
        assert result.exit_code == EXIT_OK
        anchors = [c["anchor"] for c in _json(result)["claims"]]
        assert anchors == ["bracket-antisymmetry", "degree-additivity", "jacobi-identity", "gtilde-ideal"]

    def test_lemmas(self, cli):
        result = cli.invoke(main, ["--task", "lemmas"])
        assert result.exit_code == EXIT_OK, result.output

    def test_cartan_file(self, cli, tmp_path):
        path = tmp_path / "b2.txt"
        path.write_text("# B2\n2\n2 -2\n-1 2\n")
        result = cli.invoke(main, ["--cartan-file", str(path), "--task", "build", "--format", "json"])
        assert result.exit_code == EXIT_OK, result.output
        data = _json(result)
        assert data["cartan_type"] == "file:b2.txt"
        assert data["algebra"]["dim"] == 10

    def test_deterministic(self, cli):
        args = ["--task", "postlie", "--degrees", "0", "--seed", "3", "--format", "json"]
        assert cli.invoke(main, args).stdout == cli.invoke(main, args).stdout


class TestReport:
    def test_failed_claim_exit_code(self, cli, monkeypatch):
        from app.cli import runner

        monkeypatch.setitem(runner.EXPECTED_CENTER, runner.Selector.FULL, ["K1"])
        result = cli.invoke(main, ["--task", "center"])
        assert result.exit_code == EXIT_FAILED
        assert "[FAIL] center" in result.stdout

    def test_claim_line(self):
        claim = ClaimResult(task="derive", anchor="derivations-inner", claim="Der = Inn", passed=True,
                            dims={"der": 4, "inner": 4}, detail="n=0")
        assert claim.line() == "[PASS] derivations-inner: Der = Inn (der=4, inner=4) - n=0"

    def test_text_lists_witnesses(self):
        report = RunReport(cartan_type="A1", window=4, degrees=[0], task="center", selector="full", seed=0,
                           claims=[ClaimResult(task="center", anchor="center", claim="c", passed=False,
                                               witness=["K1"])])
        text = report.to_text()
        assert "  witness center: K1" in text
        assert text.endswith("0/1 claims passed")
        assert not report.passed

    def test_config_degrees(self):
        config = RunConfig(window=5, task=Task.BIDER)
        assert config.solver_degrees == [-3, -2, -1, 0, 1, 2, 3]
        assert config.bider_degrees == [-2, -1, 0, 1, 2]

    def test_run_derive_rows(self):
        report = run(RunConfig(window=4, degrees=(0, 1), task=Task.DERIVE))
        assert report.passed
        full = [r for r in report.derivations if r.selector == "full" and r.target == "full"]
        assert [r.n for r in full] == [0, 1]
        gtilde = [r for r in report.derivations if r.target == "gtilde" and r.selector == "full"]
        assert [(r.n, r.asserted) for r in gtilde] == [(0, False), (1, True)]
        anchors = [c.anchor for c in report.claims]
        assert anchors.count("nonzero-degree-derivations-inner") == 1
        assert anchors.count("derivations-into-gtilde-inner") == 1

    def test_informational_row_never_fails(self):
        runner = Runner(RunConfig(window=4, task=Task.DERIVE))
        row = {"selector": "full", "target": "gtilde", "N": 4, "M": 2, "n": 0, "dim_der": 9, "dim_inner": 3,
               "dim_der_interior": 5, "dim_inner_interior": 3, "h1": 2, "inner_contained": True,
               "interior_equal": False, "asserted": False}
        runner._derivation_claims([row], "nonzero-degree-derivations-inner", "Der = Inn for n != 0")
        assert len(runner.report.derivations) == 1
        assert runner.report.claims == []
        assert runner.report.passed

    @pytest.mark.slow
    def test_all_json_round_trip(self, cli):
        result = cli.invoke(main, ["--task", "all", "--format", "json", "--oracle"])
        assert result.exit_code == EXIT_OK, result.stdout
        report = RunReport.model_validate_json(result.stdout)
        assert report.passed
        assert report.model_dump_json(indent=2) == result.stdout.strip()
        print(f"\n✓ {len(report.claims)} affirmations vérifiées")
