import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from application.services.operators.conjugation import (
    Conjugation, conjugate_by_gauge, conjugation_from_document, from_basis_images, make_conjugation,
    verify_c_symmetry,
)
from application.services.operators.shift_operator import build_shift, positivize_weights
from application.services.trees.tree_core import generate_path
from utils.errors import ConjugationError

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def fork_conjugation(fork_tree, fork_images):
    return from_basis_images(fork_images, fork_tree.vertices)


def test_fork_conjugation_matrix(fork_conjugation):
    h = 1 / SQRT2
    expected = np.array([[0, 0, 0, 1], [0, -h, h, 0], [0, h, h, 0], [1, 0, 0, 0]])
    assert np.allclose(fork_conjugation.A, expected)
    assert fork_conjugation.residual_unitary <= 1e-12
    assert fork_conjugation.residual_symmetric <= 1e-12


def test_fork_conjugation_intertwines(fork_shift, fork_conjugation):
    report = verify_c_symmetry(fork_shift, fork_conjugation, 1e-10)
    assert report.passed
    assert report.residual <= 1e-12
    assert report.to_dict()["pass"] is True


def test_identity_fails_on_stem(stem_shift):
    report = verify_c_symmetry(stem_shift, make_conjugation(np.eye(5)))
    assert not report.passed
    assert report.residual == pytest.approx(math.sqrt(8.0))
    assert report.worst_basis_vector in stem_shift.basis


def test_identity_conjugation():
    C = make_conjugation(np.eye(3))
    assert np.array_equal(C.A, np.eye(3))
    assert C.is_valid()


def test_zero_operator_is_symmetric_for_any_conjugation():
    report = verify_c_symmetry(np.zeros((2, 2)), make_conjugation(np.array([[0, 1], [1, 0]])))
    assert report.passed and report.residual == 0.0


def test_antisymmetric_matrix_is_rejected():
    with pytest.raises(ConjugationError) as error:
        make_conjugation(np.array([[0, 1], [-1, 0]]))
    assert error.value.residual_symmetric == pytest.approx(2.0 * SQRT2)
    assert error.value.residual_unitary == pytest.approx(0.0, abs=1e-12)


def test_non_unitary_matrix_is_rejected():
    with pytest.raises(ConjugationError):
        make_conjugation(2.0 * np.eye(2))


def test_non_orthonormal_keys_are_rejected():
    e = np.eye(2)
    with pytest.raises(ConjugationError):
        from_basis_images([(e[0], e[0]), (e[0] + e[1], e[1])])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        verify_c_symmetry(np.zeros((3, 3)), make_conjugation(np.eye(2)))


def test_conjugation_document_round_trip(fork_conjugation):
    restored = conjugation_from_document(fork_conjugation.to_document())
    assert np.allclose(restored.A, fork_conjugation.A)
    assert restored.basis == fork_conjugation.basis


def test_antilinear_properties(fork_conjugation):
    rng = np.random.default_rng(7)
    f = rng.normal(size=4) + 1j * rng.normal(size=4)
    g = rng.normal(size=4) + 1j * rng.normal(size=4)
    C = fork_conjugation
    assert np.allclose(C.apply(C.apply(f)), f)
    assert np.vdot(C.apply(f), C.apply(g)) == pytest.approx(np.conj(np.vdot(f, g)))
    assert np.allclose(C.apply(2j * f), -2j * C.apply(f))


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_residual_of_adjoint_matches(seed):
    rng = np.random.default_rng(seed)
    T = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = 1 / SQRT2
    C = Conjugation(np.array([[0, 0, 0, 1], [0, -h, h, 0], [0, h, h, 0], [1, 0, 0, 0]], dtype=complex))
    forward = verify_c_symmetry(T, C).residual
    backward = verify_c_symmetry(T.conj().T, C).residual
    assert backward == pytest.approx(forward, rel=1e-9, abs=1e-12)


def test_gauge_transport_on_path():
    tree = generate_path(3)
    weights = {"1": 1j, "2": -1.0}
    positive, phases, _ = positivize_weights(tree, weights)
    flip = make_conjugation(np.fliplr(np.eye(3)), tree.vertices)
    assert verify_c_symmetry(build_shift(tree, positive), flip).passed
    transported = conjugate_by_gauge(flip, phases)
    assert verify_c_symmetry(build_shift(tree, weights), transported).passed
    assert not verify_c_symmetry(build_shift(tree, weights), flip).passed
