"""
conjugation.py
Сопряжения C f = A·conj(f), хранимые симметричной унитарной матрицей A, и проверка C-симметричности оператора:
T = C T* C  ⇔  T A = A Tᵀ.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from utils.config import DEFAULT_TOL
from utils.errors import ConjugationError
from utils.linalg import frobenius
from utils.utils import matrix_to_pairs, pairs_to_matrix


@dataclass(frozen=True, eq=False)
class Conjugation:
    """
    Антилинейное сопряжение. Столбец k матрицы A равен C e_k.
    """
    A: np.ndarray = field(repr=False)
    basis: Tuple[str, ...] = ()

    @property
    def size(self):
        return self.A.shape[0]

    @property
    def residual_unitary(self):
        return frobenius(self.A @ self.A.conj().T - np.eye(self.size))

    @property
    def residual_symmetric(self):
        return frobenius(self.A - self.A.T)

    def apply(self, vector):
        return self.A @ np.conj(np.asarray(vector, dtype=complex))

    def is_valid(self, tol=DEFAULT_TOL):
        return self.residual_unitary <= tol and self.residual_symmetric <= tol

    def to_document(self):
        return {
            "A": matrix_to_pairs(self.A),
            "basis": list(self.basis),
            "residual_unitary": self.residual_unitary,
            "residual_symmetric": self.residual_symmetric,
        }


def make_conjugation(matrix, basis=(), tol=DEFAULT_TOL):
    """
    Создаёт сопряжение по матрице и проверяет, что она симметрична и унитарна.
    :raises ConjugationError: С обеими невязками, если проверка не пройдена.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ConjugationError("Матрица сопряжения должна быть квадратной.")
    if basis and len(basis) != matrix.shape[0]:
        raise ConjugationError("Длина базиса не совпадает с размером матрицы сопряжения.")
    conjugation = Conjugation(matrix, tuple(basis))
    unitary, symmetric = conjugation.residual_unitary, conjugation.residual_symmetric
    if unitary > tol or symmetric > tol:
        raise ConjugationError(
            f"Матрица не задаёт сопряжение: ‖AA*−I‖ = {unitary:.3e}, ‖A−Aᵀ‖ = {symmetric:.3e}.",
            unitary, symmetric)
    return conjugation


def from_basis_images(images, basis=(), tol=DEFAULT_TOL):
    """
    Собирает сопряжение по образам ортонормированного базиса.
    :param images: Список пар (ключ, образ). Ключ - метка вершины из basis (тогда это e_v) или вектор q_k;
                   образ - вектор C q_k.
    :param basis: Метки вершин, задающие порядок координат.
    :return: Conjugation с A = Y Qᵀ, где столбцы Q - ключи, столбцы Y - образы.
    :raises ConjugationError: Ключи не ортонормированы или результат не симметричен и не унитарен.
    """
    basis = tuple(basis)
    keys, values = [], []
    for key, image in images:
        if isinstance(key, str):
            if key not in basis:
                raise ConjugationError(f"Вершина {key} отсутствует в базисе.")
            vector = np.zeros(len(basis), dtype=complex)
            vector[basis.index(key)] = 1.0
        else:
            vector = np.asarray(key, dtype=complex)
        keys.append(vector)
        values.append(np.asarray(image, dtype=complex))
    Q = np.column_stack(keys)
    Y = np.column_stack(values)
    if Q.shape[0] != Q.shape[1] or Y.shape != Q.shape:
        raise ConjugationError("Образы должны быть заданы на полном базисе.")
    if frobenius(Q.conj().T @ Q - np.eye(Q.shape[1])) > tol:
        raise ConjugationError("Векторы, на которых задано сопряжение, не образуют ортонормированный базис.")
    # C q = A conj(q) = y для всех столбцов: A conj(Q) = Y, conj(Q)^{-1} = Qᵀ
    return make_conjugation(Y @ Q.T, basis, tol)


def conjugation_from_document(document, tol=DEFAULT_TOL):
    return make_conjugation(pairs_to_matrix(document["A"]), tuple(document.get("basis", ())), tol)


def conjugate_by_gauge(conjugation, phases, tol=DEFAULT_TOL):
    """
    Переносит сопряжение через диагональную унитарную калибровку D = diag(phases):
    если A сопрягает D* T D, то D A D сопрягает T.
    """
    phases = np.asarray(phases, dtype=complex)
    gauge = np.diag(phases)
    return make_conjugation(gauge @ conjugation.A @ gauge, conjugation.basis, tol)


@dataclass(frozen=True)
class SymmetryReport:
    residual: float
    passed: bool
    tol: float
    worst_basis_vector: Optional[str]
    worst_residual: float

    def to_dict(self):
        return {
            "residual": self.residual,
            "pass": self.passed,
            "tol": self.tol,
            "worst_basis_vector": self.worst_basis_vector,
            "worst_residual": self.worst_residual,
        }


def verify_c_symmetry(T, conjugation, tol=DEFAULT_TOL):
    """
    Проверяет T = C T* C в матричной форме: невязка ‖T A − A Tᵀ‖_F.
    :param T: Квадратная матрица или ShiftMatrix.
    :param conjugation: Conjugation
    :return: SymmetryReport с невязкой и базисным вектором, на котором она наибольшая.
    :raises ValueError: Размеры не совпадают.
    """
    matrix = np.asarray(getattr(T, "matrix", T), dtype=complex)
    if matrix.shape != conjugation.A.shape:
        raise ValueError(f"Размеры оператора {matrix.shape} и сопряжения {conjugation.A.shape} не совпадают.")
    difference = matrix @ conjugation.A - conjugation.A @ matrix.T
    residual = frobenius(difference)
    column_norms = np.linalg.norm(difference, axis=0)
    worst = int(np.argmax(column_norms)) if column_norms.size else 0
    if conjugation.basis:
        label = conjugation.basis[worst]
    elif getattr(T, "basis", None):
        label = T.basis[worst]
    else:
        label = str(worst)
    return SymmetryReport(residual, residual <= tol, tol, label if column_norms.size else None,
                          float(column_norms[worst]) if column_norms.size else 0.0)
