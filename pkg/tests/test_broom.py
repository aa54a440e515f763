import math

import numpy as np
import pytest

from application.services.broom.broom import (
    BROOM_NOTES, BroomSchedule, build_broom_conjugation, solve_h_sequence, two_level_kernel_structure,
)
from utils.errors import BroomConstructionError, InfeasibleScheduleError, WeightError

DECAYING = [10.0 ** -i for i in range(1, 7)]


def test_first_step():
    h = solve_h_sequence([0.5])
    assert h.vectors[0, 0] == pytest.approx(math.sqrt(3.0))
    assert h.s_values == (pytest.approx(math.sqrt(3.0)),)


def test_second_step():
    h = solve_h_sequence([0.5, 0.5])
    assert h.coefficients[1][0] == pytest.approx(-1 / 3)
    assert h.s_values[1] ** 2 == pytest.approx(8 / 3)
    assert h.gram[0, 1] == pytest.approx(-1.0)


def test_coefficients_match_closed_form():
    weights = [0.5, 0.3, 0.2]
    h = solve_h_sequence(weights)
    mass = weights[0] ** 2 + weights[1] ** 2
    expected = [-(w ** 2) / (1 - mass) for w in weights[:2]]
    assert list(h.coefficients[2]) == pytest.approx(expected)
    assert h.s_values[2] ** 2 == pytest.approx((1 - 0.04) / 0.04 - mass / (1 - mass))


def test_decaying_schedule_is_feasible():
    h = solve_h_sequence(DECAYING)
    residuals = h.gram_residuals()
    assert residuals["norm"] <= 1e-9
    assert residuals["inner"] <= 1e-8
    assert all(step["feasible"] for step in h.schedule.feasibility())


def test_infeasible_schedule():
    with pytest.raises(InfeasibleScheduleError) as error:
        solve_h_sequence([0.9, 0.9])
    assert error.value.step == 2
    assert error.value.deficit < 0
    flags = BroomSchedule((0.9, 0.9)).feasibility()
    assert [step["feasible"] for step in flags] == [True, False]


@pytest.mark.parametrize("weights", [[1.5], [0.0], [0.5, 1.0], []])
def test_weights_outside_unit_interval(weights):
    with pytest.raises(WeightError):
        BroomSchedule(tuple(weights))


@pytest.mark.parametrize("count,teeth", [(1, None), (2, None), (4, 12), (6, 13)])
def test_broom_conjugation(count, teeth):
    data = build_broom_conjugation(DECAYING[:count], teeth=teeth)
    report = data.report
    assert report["passed"]
    assert report["teeth"] == (teeth or 2 * count + 1)
    assert max(report["intertwining"]) <= 1e-8
    gram = data.images.conj().T @ data.images
    assert np.allclose(gram, np.eye(count + 1), atol=1e-9)
    assert np.linalg.norm(data.f0) == pytest.approx(1.0)


def test_broom_conjugation_maps_root_to_first_column():
    data = build_broom_conjugation([0.5])
    e0 = np.zeros(data.teeth + 1)
    e0[0] = 1.0
    assert np.allclose(data.apply(e0), data.f0)
    assert np.allclose(data.apply(1j * e0), -1j * data.f0)


def test_too_few_teeth():
    with pytest.raises(BroomConstructionError) as error:
        build_broom_conjugation([0.5, 0.25], teeth=4)
    assert error.value.check == "teeth"


@pytest.mark.parametrize("n", [1, 2, 5])
def test_two_level_kernels(n):
    rng = np.random.default_rng(n)
    first = list(rng.uniform(0.5, 2.0, size=n))
    second = list(rng.uniform(0.5, 2.0, size=n))
    report = two_level_kernel_structure(n, first, second)
    assert report["dimensions"]["ker_S"] == n
    assert report["dimensions"]["ker_S_adjoint"] == n
    assert report["dimensions"] == report["expected_dimensions"]
    assert report["max_distance"] <= 1e-10


def test_two_level_kernels_with_unit_weights():
    report = two_level_kernel_structure(2, [1, 1], [1, 1])
    assert report["dimensions"]["ker_S"] == 2
    assert report["dimensions"]["ker_S_adjoint"] == 2


def test_two_level_rejects_zero_weight():
    with pytest.raises(WeightError):
        two_level_kernel_structure(2, [1, 0], [1, 1])
    with pytest.raises(WeightError):
        two_level_kernel_structure(2, [1], [1, 1])


def test_report_records_weight_range_convention():
    report = build_broom_conjugation([0.5]).report
    assert report["notes"] == list(BROOM_NOTES)
    assert "(0, 1)" in report["notes"][0]
