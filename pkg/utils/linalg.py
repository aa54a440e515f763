"""
linalg.py
Численные примитивы линейной алгебры: численный ранг, ядро, образ и расстояние между подпространствами.
Все функции принимают плотные комплексные матрицы numpy.
"""

import numpy as np
from scipy import linalg

from utils.config import DEFAULT_RANK_TOL


def numerical_rank(matrix, rank_tol=DEFAULT_RANK_TOL):
    """
    Численный ранг: количество сингулярных чисел больше rank_tol·σ_max.
    :param matrix: Квадратная или прямоугольная матрица.
    :param rank_tol: Относительный порог.
    :return: Целое число.
    """
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0
    singular = linalg.svdvals(matrix)
    if singular.size == 0 or singular[0] == 0.0:
        return 0
    return int(np.count_nonzero(singular > rank_tol * singular[0]))


def nullity(matrix, rank_tol=DEFAULT_RANK_TOL):
    return np.asarray(matrix).shape[1] - numerical_rank(matrix, rank_tol)


def kernel_basis(matrix, rank_tol=DEFAULT_RANK_TOL):
    """
    Ортонормированный базис ядра (столбцы результата).
    """
    matrix = np.asarray(matrix, dtype=complex)
    if not np.any(matrix):
        return np.eye(matrix.shape[1], dtype=complex)
    return linalg.null_space(matrix, rcond=rank_tol)


def range_basis(matrix, rank_tol=DEFAULT_RANK_TOL):
    """
    Ортонормированный базис образа (столбцы результата).
    """
    matrix = np.asarray(matrix, dtype=complex)
    if not np.any(matrix):
        return np.zeros((matrix.shape[0], 0), dtype=complex)
    return linalg.orth(matrix, rcond=rank_tol)


def projector(basis):
    basis = np.asarray(basis, dtype=complex)
    return basis @ basis.conj().T


def subspace_distance(first, second):
    """
    Расстояние между подпространствами как спектральная норма разности ортопроекторов.
    При разных размерностях расстояние равно 1.
    :param first: Ортонормированный базис первого подпространства (столбцы).
    :param second: Ортонормированный базис второго подпространства (столбцы).
    :return: Число от 0 до 1.
    """
    first = np.asarray(first, dtype=complex)
    second = np.asarray(second, dtype=complex)
    if first.shape[1] != second.shape[1]:
        return 1.0
    if first.shape[1] == 0:
        return 0.0
    return float(linalg.norm(projector(first) - projector(second), 2))


def frobenius(matrix):
    return float(np.linalg.norm(matrix, "fro"))
