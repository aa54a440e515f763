import math

import numpy as np
import pytest

from application.services.decider.symmetry_decider import CS, DecideOptions
from application.services.families.cross_validation import (
    Instance, RelationSampler, cross_validate, evaluate_instance, parameter_grid, sample_instance, summarize,
)
from utils.errors import FamilyError
from utils.utils import dump_json

FAST = DecideOptions(tol=1e-8, restarts=8)
GRID = DecideOptions(tol=1e-8)


def test_relation_sampler_respects_ratios():
    sampler = RelationSampler([1, 2, 3], [(1, 2, 0.5), (2, 3, 2.0)])
    assert sampler.consistent
    assert sampler.constrained == [1, 2, 3]
    moduli = sampler.sample(np.random.default_rng(0))
    assert moduli[1] == pytest.approx(0.5 * moduli[2])
    assert moduli[2] == pytest.approx(2.0 * moduli[3])


def test_relation_sampler_detects_inconsistency():
    sampler = RelationSampler([1, 2], [(1, 2, 1.0), (2, 1, 2.0)])
    assert not sampler.consistent


def test_parameter_grid():
    assert parameter_grid("two_branch", 1, 2) == [
        {"kappa": 0, "theta": 1}, {"kappa": 0, "theta": 2}, {"kappa": 1, "theta": 1}, {"kappa": 1, "theta": 2},
    ]
    assert parameter_grid("two_branch", 2, 3, theta_minus_kappa=1) == [
        {"kappa": 0, "theta": 1}, {"kappa": 1, "theta": 2}, {"kappa": 2, "theta": 3},
    ]
    assert parameter_grid("binary", 3) == [{"kappa": 2}, {"kappa": 3}]
    with pytest.raises(FamilyError):
        parameter_grid("binary", 7)
    with pytest.raises(FamilyError):
        parameter_grid("broom", 2)


def test_samples_are_reproducible():
    params = {"kappa": 1, "theta": 2}
    assert sample_instance("two_branch", params, 0, 3, 42) == sample_instance("two_branch", params, 0, 3, 42)
    values, construction = sample_instance("two_branch", params, 0, 0, 42)
    assert construction == "satisfying"
    assert abs(values[0]) == pytest.approx(abs(values[2]))
    values, construction = sample_instance("two_branch", params, 0, 1, 42)
    assert construction == "perturbed"
    assert abs(values[0]) != pytest.approx(abs(values[2]))


def test_empty_grid():
    report = cross_validate("two_branch", 1, 2, samples=0, options=FAST)
    assert report["instances"] == []
    assert report["summary"]["total"] == 0
    assert report["summary"]["agreement_rate"] is None


def test_printed_condition_holds_when_branches_are_one_longer():
    report = cross_validate("two_branch", 1, 2, samples=4, seed=1, options=FAST, theta_minus_kappa=1)
    summary = report["summary"]
    assert summary["total"] == 8
    assert summary["contradictions"] == 0
    assert summary["undetermined"] == 0
    assert summary["agreement_rate"] == 1.0
    for record in report["instances"]:
        assert record["certified"]


def test_binary_disagreement_is_certified():
    report = cross_validate("binary", 2, samples=2, seed=3, options=FAST)
    first = report["instances"][0]
    assert first["construction"] == "satisfying"
    assert first["truth"] == CS
    assert not first["printed_condition"]["satisfied"]
    assert first["certified"]
    assert report["summary"]["certified_disagreements"]
    assert report["summary"]["contradictions"] == 0


def test_report_is_deterministic():
    first = cross_validate("two_branch", 1, 2, samples=2, seed=5, options=FAST, theta_minus_kappa=1)
    second = cross_validate("two_branch", 1, 2, samples=2, seed=5, options=FAST, theta_minus_kappa=1)
    assert dump_json(first) == dump_json(second)


def test_parallel_report_matches_serial():
    serial = cross_validate("two_branch", 1, 2, samples=2, seed=5, options=FAST, theta_minus_kappa=1)
    parallel = cross_validate("two_branch", 1, 2, samples=2, seed=5, options=FAST, theta_minus_kappa=1, workers=3)
    assert dump_json(serial) == dump_json(parallel)


def test_summarize_counts():
    records = [
        {"index": 0, "params": {}, "printed_condition": {"satisfied": True}, "truth": CS, "agree": True,
         "certified": True, "contradiction": False},
        {"index": 1, "params": {}, "printed_condition": {"satisfied": True}, "truth": None, "agree": False,
         "certified": False, "contradiction": False},
    ]
    summary = summarize(records)
    assert summary["total"] == 2
    assert summary["agree"] == 1
    assert summary["undetermined"] == 1
    assert summary["agreement_matrix"]["satisfied/cs"] == 1
    assert summary["agreement_matrix"]["satisfied/undetermined"] == 1
    assert summary["disagree"] == 0


@pytest.fixture(scope="module")
def one_longer_grid():
    return cross_validate("two_branch", 3, 4, samples=20, options=GRID, theta_minus_kappa=1)


@pytest.mark.slow
def test_one_longer_grid_agrees_everywhere(one_longer_grid):
    summary = one_longer_grid["summary"]
    assert summary["total"] == 80
    assert summary["agreement_rate"] == 1.0
    assert summary["undetermined"] == 0
    assert summary["contradictions"] == 0
    assert all(record["certified"] for record in one_longer_grid["instances"])
    assert {record["params"]["kappa"] for record in one_longer_grid["instances"]} == {0, 1, 2, 3}


@pytest.mark.slow
def test_explicit_conjugation_built_whenever_condition_holds(one_longer_grid):
    satisfied = [record for record in one_longer_grid["instances"] if record["printed_condition"]["satisfied"]]
    assert satisfied
    for record in satisfied:
        audit = record["construction_audit"]
        assert audit["built"], audit
        assert audit["residual"] <= 1e-10


@pytest.mark.slow
def test_one_longer_grid_is_reproducible(one_longer_grid):
    again = cross_validate("two_branch", 3, 4, samples=20, options=GRID, theta_minus_kappa=1)
    assert dump_json(again) == dump_json(one_longer_grid)


@pytest.mark.slow
def test_sqrt_two_range_disagreements_are_certified():
    report = cross_validate("two_branch", 0, 2, samples=20, seed=2, options=FAST, theta_minus_kappa=2)
    assert report["summary"]["total"] == 20
    assert report["summary"]["contradictions"] == 0
    assert all(entry["certified"] for entry in report["summary"]["certified_disagreements"])
    again = cross_validate("two_branch", 0, 2, samples=20, seed=2, options=FAST, theta_minus_kappa=2)
    assert dump_json(again) == dump_json(report)


def test_sqrt_two_range_instance():
    instance = Instance(0, "two_branch", {"kappa": 0, "theta": 2}, 0, 0, (1.0, math.sqrt(2.0)), "fixed")
    record = evaluate_instance(instance, FAST)
    assert record["truth"] == CS
    assert record["certified"]
    assert not record["contradiction"]
    assert record["pairing"]["verdict"] == CS


@pytest.mark.slow
def test_binary_report_is_reproducible():
    first = cross_validate("binary", 3, samples=6, seed=4, options=FAST)
    second = cross_validate("binary", 3, samples=6, seed=4, options=FAST)
    assert dump_json(first) == dump_json(second)
    assert first["summary"]["contradictions"] == 0
    assert all(entry["certified"] for entry in first["summary"]["certified_disagreements"])
