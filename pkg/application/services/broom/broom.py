"""
broom.py
Конструкции на конечных усечениях веников.

1. Индукция для векторов h_1..h_N: ‖h_i‖² = (1−λ_i²)/λ_i², ⟨h_i, h_j⟩ = −1 при i ≠ j. На шаге n коэффициенты
   t решают G t = −𝟙 с текущей матрицей Грама G, новый вектор h_n = Σ t_j h_j + s_n f_n, s_n² = d_n − tᵀ G t.
2. Частичное сопряжение на венике с M ≥ 2N+1 зубцами: C e_0 = f_0, C e_i = g_i = λ_i(e_0 + h_i).
3. Структура ядер S и S* на двухуровневом венике.

Веса расписания лежат в (0, 1): при λ_i ≥ 1 норма h_i не может быть неотрицательной.
"""

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import linalg

from application.services.operators.shift_operator import build_shift
from application.services.trees.tree_core import generate_broom, generate_two_level_broom, make_label
from utils.config import BROOM_CHECK_TOL, BROOM_GRAM_TOL
from utils.errors import BroomConstructionError, InfeasibleScheduleError, WeightError
from utils.linalg import kernel_basis, range_basis, subspace_distance
from utils.logs.logger import logger

# Соглашения конструкции, записываемые в каждый отчёт
BROOM_NOTES = (
    "Веса зубцов взяты из (0, 1), а не из (1, ∞): ‖h_i‖² = (1 − λ_i²)/λ_i² неотрицательна только при λ_i ≤ 1.",
    "Унимодулярный множитель α в C e_0 = α f_0 равен 1.",
    "Коэффициенты t - решение системы G t = −𝟙 с текущей матрицей Грама.",
    "Зубцы N+1..M несут равные веса τ, при которых ‖S e_0‖ = 1.",
)


@dataclass(frozen=True)
class BroomSchedule:
    """
    Веса λ_1..λ_N зубцов веника.
    """
    weights: Tuple[float, ...]

    def __post_init__(self):
        if not self.weights:
            raise WeightError("Расписание веника должно содержать хотя бы один вес.")
        for i, weight in enumerate(self.weights, start=1):
            if not 0.0 < weight < 1.0:
                raise WeightError(f"Вес λ_{i} = {weight} вне интервала (0, 1).", str(i))

    @property
    def size(self):
        return len(self.weights)

    def target_norms(self):
        """
        d_i = (1 − λ_i²)/λ_i².
        """
        w = np.asarray(self.weights, dtype=float)
        return (1.0 - w ** 2) / w ** 2

    def feasibility(self):
        """
        Шаг n выполним тогда и только тогда, когда Σ_{i≤n} λ_i² < 1.
        :return: Список словарей {step, mass, feasible}.
        """
        flags, mass = [], 0.0
        for n, weight in enumerate(self.weights, start=1):
            mass += weight ** 2
            flags.append({"step": n, "mass": mass, "feasible": mass < 1.0})
        return flags


@dataclass(frozen=True, eq=False)
class HSequence:
    """
    Векторы h_1..h_N в ортонормированной системе f_1..f_N (строка i - координаты h_{i+1}).
    """
    schedule: BroomSchedule
    vectors: np.ndarray
    coefficients: Tuple[Tuple[float, ...], ...]
    s_values: Tuple[float, ...]

    @property
    def gram(self):
        return self.vectors @ self.vectors.T

    def gram_residuals(self):
        """
        Наибольшие отклонения: |‖h_i‖² − d_i| / max(1, d_i) и |⟨h_i, h_j⟩ + 1| при i ≠ j.
        """
        gram = self.gram
        targets = self.schedule.target_norms()
        norm = float(np.max(np.abs(np.diag(gram) - targets) / np.maximum(1.0, targets)))
        off = gram + 1.0
        np.fill_diagonal(off, 0.0)
        return {"norm": norm, "inner": float(np.max(np.abs(off))) if gram.shape[0] > 1 else 0.0}

    def to_dict(self):
        return {
            "weights": list(self.schedule.weights),
            "t": [list(row) for row in self.coefficients],
            "s": list(self.s_values),
            "vectors": self.vectors.tolist(),
            "gram_residuals": self.gram_residuals(),
            "feasibility": self.schedule.feasibility(),
        }


def target_gram(targets):
    n = len(targets)
    return np.diag(targets) - (np.ones((n, n)) - np.eye(n))


def solve_h_sequence(schedule):
    """
    Индукция по n: h_1 = √d_1 f_1; на шаге n решается G t = −𝟙 (разложение Холецкого), s_n = √(d_n − tᵀ G t).
    :param schedule: BroomSchedule или последовательность весов.
    :return: HSequence
    :raises InfeasibleScheduleError: Если на каком-то шаге s_n² ≤ 0.
    """
    if not isinstance(schedule, BroomSchedule):
        schedule = BroomSchedule(tuple(float(w) for w in schedule))
    targets = schedule.target_norms()
    N = schedule.size
    H = np.zeros((N, N))
    H[0, 0] = math.sqrt(targets[0])
    coefficients, s_values = [()], [H[0, 0]]
    for n in range(1, N):
        gram = target_gram(targets[:n])
        try:
            factor = linalg.cho_factor(gram)
        except linalg.LinAlgError:
            mass = float(np.sum(np.asarray(schedule.weights[:n]) ** 2))
            raise InfeasibleScheduleError(f"Матрица Грама на шаге {n + 1} не положительно определена.",
                                          n + 1, mass - 1.0)
        t = linalg.cho_solve(factor, -np.ones(n))
        s_squared = float(targets[n] - t @ gram @ t)
        if s_squared <= 0.0:
            logger.log(f"Шаг {n + 1} индукции невыполним: s² = {s_squared:.6g}.", "WARNING")
            raise InfeasibleScheduleError(f"Шаг {n + 1} невыполним: s² = {s_squared:.6g} ≤ 0; веса убывают слишком "
                                          f"медленно.", n + 1, s_squared)
        s = math.sqrt(s_squared)
        H[n, :n] = t @ H[:n, :n]
        H[n, n] = s
        coefficients.append(tuple(float(x) for x in t))
        s_values.append(s)
    sequence = HSequence(schedule, H, tuple(coefficients), tuple(s_values))
    residuals = sequence.gram_residuals()
    if max(residuals.values()) > BROOM_GRAM_TOL:
        logger.log(f"Матрица Грама векторов h_i отличается от целевой: {residuals}.", "WARNING")
    return sequence


@dataclass(frozen=True, eq=False)
class BroomConjugationData:
    schedule: BroomSchedule
    teeth: int
    images: np.ndarray
    f0: np.ndarray
    f: np.ndarray
    shift: object
    report: dict

    def apply(self, vector):
        """
        C v = Σ_{j ≤ N} conj(v_j) C e_j для v из lin{e_0..e_N}.
        """
        vector = np.asarray(vector, dtype=complex)
        return self.images @ np.conj(vector[: self.schedule.size + 1])


def _max_offdiag(gram):
    off = np.array(gram, dtype=complex)
    np.fill_diagonal(off, 0.0)
    return float(np.max(np.abs(off))) if off.size > 1 else 0.0


def build_broom_conjugation(schedule, h_sequence=None, teeth=None, tol=BROOM_CHECK_TOL):
    """
    Частичное сопряжение на lin{e_0..e_N} веника с M зубцами: зубцы 1..N несут веса расписания, зубцы N+1..M -
    равные веса τ, при которых ‖S e_0‖ = 1. f_0 = S e_0, f_1..f_N ортонормированы и ортогональны e_0 и f_0.
    :param teeth: Число зубцов M ≥ 2N+1 (по умолчанию 2N+1).
    :return: BroomConjugationData с отчётом проверок.
    :raises BroomConstructionError: Если какая-то проверка не прошла; ошибка содержит пару индексов и невязку.
    """
    if not isinstance(schedule, BroomSchedule):
        schedule = BroomSchedule(tuple(float(w) for w in schedule))
    h_sequence = h_sequence or solve_h_sequence(schedule)
    N = schedule.size
    M = teeth if teeth is not None else 2 * N + 1
    if M < 2 * N + 1:
        raise BroomConstructionError(f"Нужно не меньше 2N+1 = {2 * N + 1} зубцов, передано {M}.",
                                     "teeth", None, float(M))
    weights = np.asarray(schedule.weights, dtype=float)
    mass = float(np.sum(weights ** 2))
    tail = math.sqrt((1.0 - mass) / (M - N))

    tree = generate_broom(M)
    tooth_weights = {str(i): (weights[i - 1] if i <= N else tail) for i in range(1, M + 1)}
    shift = build_shift(tree, tooth_weights)
    size = M + 1

    f0 = shift.matrix[:, 0].copy()
    seed = np.zeros((size, M - N + 1), dtype=complex)
    seed[:, 0] = f0
    for column, tooth in enumerate(range(N + 1, M + 1), start=1):
        seed[tooth, column] = 1.0
    q, _ = linalg.qr(seed, mode="economic")
    # первый столбец q совпадает с f_0 с точностью до знака
    f = q[:, 1:N + 1]

    e0 = np.zeros(size, dtype=complex)
    e0[0] = 1.0
    images = np.zeros((size, N + 1), dtype=complex)
    images[:, 0] = f0
    for i in range(N):
        h = f @ h_sequence.vectors[i].astype(complex)
        images[:, i + 1] = weights[i] * (e0 + h)

    gram = images.conj().T @ images
    checks = {
        "normalization": float(np.max(np.abs(np.diag(gram) - 1.0))),
        "orthogonality": _max_offdiag(gram[1:, 1:]),
        "f0_orthogonality": float(np.max(np.abs(gram[0, 1:]))) if N else 0.0,
    }
    gram_residuals = h_sequence.gram_residuals()

    def apply(vector):
        return images @ np.conj(vector[: N + 1])

    S, S_adjoint = shift.matrix, shift.matrix.conj().T
    intertwining = []
    for j in range(N + 1):
        e = np.zeros(size, dtype=complex)
        e[j] = 1.0
        intertwining.append(float(np.linalg.norm(S @ apply(e) - apply(S_adjoint @ e))))

    report = {
        "teeth": M,
        "tail_weight": tail,
        "mass": mass,
        "checks": checks,
        "gram_residuals": gram_residuals,
        "intertwining": intertwining,
        "tol": tol,
        "notes": list(BROOM_NOTES),
    }
    logger.log(f"Сопряжение на венике с {M} зубцами: {BROOM_NOTES[0]}", "INFO")
    data = BroomConjugationData(schedule, M, images, f0, f, shift, report)

    for name, value in checks.items():
        if value > tol:
            pair = _worst_pair(gram, name)
            raise BroomConstructionError(f"Проверка {name} не пройдена: невязка {value:.3e} на паре {pair}.",
                                         name, pair, value, report)
    for j, value in enumerate(intertwining):
        if value > tol:
            raise BroomConstructionError(f"‖(S C − C S*) e_{j}‖ = {value:.3e} больше допуска.",
                                         "intertwining", (j, j), value, report)
    report["passed"] = True
    return data


def _worst_pair(gram, check):
    size = gram.shape[0]
    if check == "normalization":
        i = int(np.argmax(np.abs(np.diag(gram) - 1.0)))
        return (i, i)
    if check == "f0_orthogonality":
        return (0, int(np.argmax(np.abs(gram[0, 1:]))) + 1)
    off = np.abs(gram[1:, 1:].copy())
    np.fill_diagonal(off, 0.0)
    i, j = np.unravel_index(int(np.argmax(off)), off.shape)
    return (int(i) + 1, int(j) + 1) if size > 1 else (0, 0)


def two_level_kernel_structure(n, first, second, rank_tol=1e-10):
    """
    Ядра S и S* двухуровневого веника и их ортогональные дополнения в сравнении с ожидаемыми:
    ker S = H_2, ker S* = e_0 ⊕ (H_1 ⊖ f_1), (ker S*)^⊥ = ℂ f_1 ⊕ H_2, (ker S)^⊥ = e_0 ⊕ H_1,
    где f_1 = Σ λ_{1,i} e_{1,i} / ‖·‖, H_k = lin{e_{k,j}}.
    :param first: Веса λ_{1,j}.
    :param second: Веса λ_{2,j}.
    :return: Словарь с размерностями и расстояниями между подпространствами.
    :raises WeightError: Нулевой вес или длина не равна N.
    """
    first, second = list(first), list(second)
    if len(first) != n or len(second) != n:
        raise WeightError(f"Нужно по {n} весов на каждом уровне.")
    for level, values in ((1, first), (2, second)):
        for j, value in enumerate(values, start=1):
            if value == 0:
                raise WeightError(f"Нулевой вес λ_{{{level},{j}}}.", make_label(level, j))
    tree = generate_two_level_broom(n)
    weights = {}
    for j in range(1, n + 1):
        weights[make_label(1, j)] = first[j - 1]
        weights[make_label(2, j)] = second[j - 1]
    shift = build_shift(tree, weights)
    size = tree.size

    def span(labels, extra=()):
        columns = []
        for label in labels:
            e = np.zeros(size, dtype=complex)
            e[tree.index[label]] = 1.0
            columns.append(e)
        columns += list(extra)
        if not columns:
            return np.zeros((size, 0), dtype=complex)
        return range_basis(np.column_stack(columns), rank_tol)

    h1 = [make_label(1, j) for j in range(1, n + 1)]
    h2 = [make_label(2, j) for j in range(1, n + 1)]
    f1 = np.zeros(size, dtype=complex)
    for j, label in enumerate(h1):
        f1[tree.index[label]] = first[j]
    f1 = f1 / np.linalg.norm(f1)
    H1 = span(h1)
    # H_1 ⊖ f_1
    complement = H1 - np.outer(f1, f1.conj() @ H1)
    h1_minus_f1 = range_basis(complement, rank_tol) if n > 1 else np.zeros((size, 0), dtype=complex)
    e0 = span(["0"])

    S = shift.matrix
    expected = {
        "ker_S": span(h2),
        "ker_S_adjoint": np.column_stack([e0, h1_minus_f1]) if h1_minus_f1.shape[1] else e0,
        "ker_S_adjoint_perp": span(h2, [f1]),
        "ker_S_perp": span(["0"] + h1),
    }
    computed = {
        "ker_S": kernel_basis(S, rank_tol),
        "ker_S_adjoint": kernel_basis(S.conj().T, rank_tol),
        "ker_S_adjoint_perp": range_basis(S, rank_tol),
        "ker_S_perp": range_basis(S.conj().T, rank_tol),
    }
    distances = {name: subspace_distance(computed[name], expected[name]) for name in expected}
    return {
        "n": n,
        "dimensions": {name: int(basis.shape[1]) for name, basis in computed.items()},
        "expected_dimensions": {name: int(basis.shape[1]) for name, basis in expected.items()},
        "distances": distances,
        "max_distance": max(distances.values()),
    }
