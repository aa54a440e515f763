import json
import math

import numpy as np
import pytest

from documents.doc_functions import emit, load_weighted_tree, read_json, weighted_tree_from_document
from tests.conftest import weighted_document
from utils.config import RunConfig
from utils.errors import DocumentError
from utils.linalg import kernel_basis, nullity, numerical_rank, range_basis, subspace_distance
from utils.logs.logger import Logger
from utils.utils import convert_numbers, dump_json, fmt, pair_to_complex, parse_number, parse_weight_list


@pytest.mark.parametrize("text,expected", [
    ("1", 1), ("-0.5", -0.5), ("i", 1j), ("-i", -1j), ("2i", 2j), ("1+2j", 1 + 2j),
    ("sqrt2", math.sqrt(2)), ("2sqrt2", 2 * math.sqrt(2)), ("-sqrt3", -math.sqrt(3)), ("1/3", 1 / 3),
])
def test_parse_number(text, expected):
    assert parse_number(text) == pytest.approx(expected)


def test_parse_number_rejects_garbage():
    with pytest.raises(ValueError):
        parse_number("abc")
    with pytest.raises(ValueError):
        parse_number("")


def test_parse_weight_list():
    assert parse_weight_list("1, 2,sqrt2") == pytest.approx([1, 2, math.sqrt(2)])
    assert parse_weight_list("") == []


def test_pair_conversion():
    assert pair_to_complex([1.0, -2.0]) == 1 - 2j
    assert pair_to_complex(3) == 3
    with pytest.raises(ValueError):
        pair_to_complex([1, 2, 3])


def test_convert_numbers():
    converted = convert_numbers({"a": np.float64(1.5), "b": [1j, np.int64(2)], "c": np.array([True, False]),
                                 1: np.bool_(True)})
    assert converted == {"a": 1.5, "b": [[0.0, 1.0], 2], "c": [True, False], "1": True}
    assert json.loads(dump_json({"z": 1, "a": 2j})) == {"a": [0.0, 2.0], "z": 1}


def test_fmt():
    assert fmt(0.1) == "0.10000000000000001"
    assert fmt(1 - 2j) == "1-2j"
    assert fmt(3) == "3"


def test_run_config_limits():
    assert RunConfig(command="check").restarts >= 1
    with pytest.raises(ValueError):
        RunConfig(command="check", tol=0)
    with pytest.raises(ValueError):
        RunConfig(command="check", word_len=1)
    embedded = RunConfig(command="check", seed=7).embedded()
    assert embedded["seed"] == 7 and "out" not in embedded


def test_numerical_rank():
    assert numerical_rank(np.diag([1.0, 1e-14, 0.0])) == 1
    assert nullity(np.diag([1.0, 1e-14, 0.0])) == 2
    assert numerical_rank(np.zeros((2, 2))) == 0
    assert kernel_basis(np.zeros((2, 3))).shape == (3, 3)
    assert range_basis(np.zeros((2, 3))).shape == (2, 0)


def test_subspace_distance():
    e = np.eye(3)
    assert subspace_distance(e[:, :1], e[:, :1]) == pytest.approx(0.0)
    assert subspace_distance(e[:, :1], e[:, 1:2]) == pytest.approx(1.0)
    assert subspace_distance(e[:, :1], e[:, :2]) == 1.0


def test_logger_filters_by_level(tmp_path):
    path = tmp_path / "app.log"
    logger = Logger(str(path), "WARNING")
    logger.log("пропущено", "INFO")
    logger.log("записано", "ERROR")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert len(lines) == 1
    assert lines[0].endswith(":ERROR:записано")
    assert ":test_logger_filters_by_level:" in lines[0]


def test_logger_attaches_traceback(tmp_path):
    path = tmp_path / "app.log"
    logger = Logger(str(path), "DEBUG")
    try:
        raise ValueError("сбой")
    except ValueError as e:
        logger.log("ошибка", "ERROR", exc_info=e)
    assert "ValueError: сбой" in path.read_text(encoding="utf-8")


def test_weighted_document_errors(fork_tree, fork_weights):
    document = weighted_document(fork_tree, fork_weights)
    tree, weights = weighted_tree_from_document(document)
    assert tree == fork_tree
    assert weights["2,2"] == pytest.approx(math.sqrt(2))

    broken = dict(document, weights=dict(document["weights"], **{"0": [1, 0]}))
    with pytest.raises(DocumentError) as error:
        weighted_tree_from_document(broken)
    assert error.value.field == "weights.0"

    broken = dict(document, weights=dict(document["weights"], **{"1,1": [1, 0, 0]}))
    with pytest.raises(DocumentError):
        weighted_tree_from_document(broken)


def test_read_json_errors(tmp_path):
    with pytest.raises(DocumentError):
        read_json(tmp_path / "missing.json")
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(DocumentError):
        read_json(path)


def test_emit_writes_file(tmp_path, fork_tree, fork_weights):
    path = tmp_path / "tree.json"
    text = emit(weighted_document(fork_tree, fork_weights), str(path))
    assert path.read_text(encoding="utf-8").strip() == text
    tree, _ = load_weighted_tree(str(path))
    assert tree == fork_tree
