import json

import numpy as np
import pytest
from click.testing import CliRunner

from application.cli import EXIT_CS, EXIT_INPUT, EXIT_NOT_CS, cli
from application.services.broom.broom import BROOM_NOTES
from application.services.operators.conjugation import from_basis_images, make_conjugation
from tests.conftest import weighted_document
from utils.utils import dump_json


@pytest.fixture
def runner():
    return CliRunner()


def read(path):
    with open(path, encoding="utf-8") as file:
        return json.load(file)


def generate(runner, path, *arguments):
    result = runner.invoke(cli, ["generate", *arguments, "--out", str(path)])
    assert result.exit_code == 0, result.output
    return path


def test_generate_then_check_fork(runner, tmp_path):
    tree = generate(runner, tmp_path / "fork.json", "--family", "uneven-fork", "--generation-weights", "1,sqrt2")
    document = read(tree)
    assert document["vertices"] == ["0", "1,1", "2,1", "2,2"]
    assert document["weights"]["2,2"][0] == pytest.approx(2 ** 0.5)

    report_path = tmp_path / "report.json"
    result = runner.invoke(cli, ["check", str(tree), "--restarts", "16", "--out", str(report_path)])
    assert result.exit_code == EXIT_CS, result.output
    report = read(report_path)
    assert report["verdict"] == "cs"
    assert report["config"]["command"] == "check"
    assert "certificate" in report


def test_check_stem_reports_obstruction(runner, tmp_path):
    tree = generate(runner, tmp_path / "stem.json", "--family", "uneven-fork", "--stem", "1")
    report_path = tmp_path / "report.json"
    result = runner.invoke(cli, ["check", str(tree), "--dump-matrix", "--out", str(report_path)])
    assert result.exit_code == EXIT_NOT_CS
    report = read(report_path)
    assert report["obstruction"]["kind"] == "word_trace"
    assert report["obstruction"]["witness"]["word_text"] == "T T T* T T* T*"
    assert report["matrix"]["basis"] == ["-1", "0", "1,1", "2,1", "2,2"]


def test_check_with_missing_weight(runner, tmp_path, fork_tree):
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(weighted_document(fork_tree, {"1,1": 1.0, "2,1": 1.0})), encoding="utf-8")
    result = runner.invoke(cli, ["check", str(path)])
    assert result.exit_code == EXIT_INPUT


def test_check_with_missing_file(runner, tmp_path):
    result = runner.invoke(cli, ["check", str(tmp_path / "absent.json")])
    assert result.exit_code == EXIT_INPUT


def test_invalid_tolerance(runner, tmp_path, fork_tree, fork_weights):
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(weighted_document(fork_tree, fork_weights)), encoding="utf-8")
    result = runner.invoke(cli, ["check", str(path), "--tol", "-1"])
    assert result.exit_code == EXIT_INPUT


def test_classify_binary(runner, tmp_path):
    out = tmp_path / "classify.json"
    result = runner.invoke(cli, ["classify", "--family", "binary", "--kappa", "2", "--weights", "1,2",
                                 "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = read(out)
    assert report["summary"] == "not satisfied (l=1)"
    assert report["condition"]["skipped"] == [2]
    assert report["alpha_chain"][0]["alpha_modulus"] == pytest.approx(0.5)


def test_classify_requires_theta(runner):
    result = runner.invoke(cli, ["classify", "--family", "two-branch", "--kappa", "1", "--weights", "1,1,1"])
    assert result.exit_code == EXIT_INPUT


def test_conjugate_two_branch(runner, tmp_path):
    out = tmp_path / "conjugation.json"
    result = runner.invoke(cli, ["conjugate", "--family", "two-branch", "--kappa", "1", "--theta", "2",
                                 "--weights", "1,1,1", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert read(out)["intertwining"]["pass"] is True

    result = runner.invoke(cli, ["conjugate", "--family", "two-branch", "--kappa", "1", "--theta", "2",
                                 "--weights", "1,1,2"])
    assert result.exit_code == EXIT_NOT_CS


def test_kernels(runner, tmp_path):
    tree = generate(runner, tmp_path / "stem.json", "--family", "uneven-fork", "--stem", "1")
    out = tmp_path / "kernels.json"
    result = runner.invoke(cli, ["kernels", str(tree), "--max-power", "3", "--json", "--out", str(out)])
    assert result.exit_code == 0
    rows = read(out)["rows"]
    assert [(row["dim_ker"], row["dim_ker_adjoint"]) for row in rows] == [(2, 2), (3, 3), (4, 4)]


def test_broom(runner, tmp_path):
    out = tmp_path / "broom.json"
    result = runner.invoke(cli, ["broom", "--weights", "0.1,0.01,0.001", "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = read(out)
    assert report["feasible"] is True
    assert report["conjugation"]["teeth"] == 7
    assert report["conjugation"]["passed"] is True
    assert report["conjugation"]["notes"] == list(BROOM_NOTES)


def test_broom_infeasible(runner, tmp_path):
    out = tmp_path / "broom.json"
    result = runner.invoke(cli, ["broom", "--weights", "0.9,0.9", "--out", str(out)])
    assert result.exit_code == EXIT_NOT_CS
    report = read(out)
    assert report["feasible"] is False
    assert report["step"] == 2
    assert report["notes"] == list(BROOM_NOTES)


def test_broom_rejects_large_weight(runner):
    result = runner.invoke(cli, ["broom", "--weights", "1.5"])
    assert result.exit_code == EXIT_INPUT


def test_two_level(runner, tmp_path):
    out = tmp_path / "two_level.json"
    result = runner.invoke(cli, ["two-level", "--weights1", "1,1", "--weights2", "1,1", "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = read(out)
    assert report["dimensions"]["ker_S"] == 2
    assert report["dimensions"]["ker_S_adjoint"] == 2


def test_crossval(runner, tmp_path):
    out = tmp_path / "crossval.json"
    result = runner.invoke(cli, ["crossval", "--family", "two-branch", "--kappa-max", "0", "--theta-max", "1",
                                 "--samples", "2", "--restarts", "8", "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = read(out)
    assert report["summary"]["total"] == 2
    assert report["config"]["options"]["tol"] == 1e-8


def test_generate_rejects_bad_parameters(runner):
    result = runner.invoke(cli, ["generate", "--family", "binary", "--kappa", "1"])
    assert result.exit_code == EXIT_INPUT


def test_verify_saved_conjugation(runner, tmp_path, fork_tree, fork_weights, fork_images):
    tree = tmp_path / "fork.json"
    tree.write_text(json.dumps(weighted_document(fork_tree, fork_weights)), encoding="utf-8")
    conjugation = tmp_path / "conjugation.json"
    conjugation.write_text(dump_json(from_basis_images(fork_images, fork_tree.vertices).to_document()),
                           encoding="utf-8")
    out = tmp_path / "verify.json"
    result = runner.invoke(cli, ["verify", str(tree), str(conjugation), "--out", str(out)])
    assert result.exit_code == EXIT_CS, result.output
    assert read(out)["pass"] is True

    identity = tmp_path / "identity.json"
    identity.write_text(dump_json(make_conjugation(np.eye(4), fork_tree.vertices).to_document()), encoding="utf-8")
    result = runner.invoke(cli, ["verify", str(tree), str(identity), "--out", str(out)])
    assert result.exit_code == EXIT_NOT_CS
    assert read(out)["worst_basis_vector"] is not None


def test_verify_rejects_foreign_basis(runner, tmp_path, fork_tree, fork_weights):
    tree = tmp_path / "fork.json"
    tree.write_text(json.dumps(weighted_document(fork_tree, fork_weights)), encoding="utf-8")
    conjugation = tmp_path / "conjugation.json"
    conjugation.write_text(dump_json(make_conjugation(np.eye(4), ("a", "b", "c", "d")).to_document()),
                           encoding="utf-8")
    result = runner.invoke(cli, ["verify", str(tree), str(conjugation)])
    assert result.exit_code == EXIT_INPUT

    conjugation.write_text(json.dumps({"A": [[[1, 0], [0, 0]], [[0, 0], [2, 0]]], "basis": []}), encoding="utf-8")
    result = runner.invoke(cli, ["verify", str(tree), str(conjugation)])
    assert result.exit_code == EXIT_INPUT


def test_broom_infeasible_prints_json(runner):
    result = runner.invoke(cli, ["broom", "--weights", "0.9,0.9", "--json"])
    assert result.exit_code == EXIT_NOT_CS
    assert '"feasible": false' in result.output
    assert '"step": 2' in result.output


def test_broom_rejects_complex_weight(runner):
    result = runner.invoke(cli, ["broom", "--weights", "0.5,0.25+0.1j"])
    assert result.exit_code == EXIT_INPUT
