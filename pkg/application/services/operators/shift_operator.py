"""
shift_operator.py
Взвешенный сдвиг S_λ на конечном дереве как плотная комплексная матрица над ℓ²(V):
(S_λ f)(v) = λ_v f(pa v), то есть S e_u = Σ_{v ∈ Chi(u)} λ_v e_v. Здесь же сопряжённый оператор, таблица
размерностей ядер степеней, калибровка весов к положительным и размеры жордановых блоков.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from utils.config import DEFAULT_RANK_TOL
from utils.errors import WeightError
from utils.linalg import nullity
from utils.utils import complex_to_pair, matrix_to_pairs


@dataclass(frozen=True, eq=False)
class ShiftMatrix:
    """
    Матрица сдвига вместе с базисом. Флаг adjoint отмечает сопряжённый оператор S*.
    """
    tree: object
    basis: Tuple[str, ...]
    matrix: np.ndarray = field(repr=False)
    weights: Dict[str, complex] = field(default_factory=dict, repr=False, compare=False)
    adjoint: bool = False

    @property
    def size(self):
        return len(self.basis)

    def column(self, label):
        return self.matrix[:, self.basis.index(label)]

    def apply(self, vector):
        return self.matrix @ np.asarray(vector, dtype=complex)

    def basis_vector(self, label):
        e = np.zeros(self.size, dtype=complex)
        e[self.basis.index(label)] = 1.0
        return e


def normalize_weights(tree, weights):
    """
    Проверяет, что веса заданы ровно на V°, и приводит их к complex.
    :raises WeightError: Нет веса для вершины, вес для корня или вес неизвестной вершины.
    """
    if tree.root in weights:
        raise WeightError(f"Вес задан для корня {tree.root}; веса определены только на некорневых вершинах.",
                          tree.root)
    known = set(tree.vertices)
    for label in weights:
        if label not in known:
            raise WeightError(f"Вес задан для неизвестной вершины {label}.", label)
    normalized = {}
    for v in tree.non_root:
        if v not in weights:
            raise WeightError(f"Не задан вес вершины {v}.", v)
        normalized[v] = complex(weights[v])
    return normalized


def build_shift(tree, weights):
    """
    Строит матрицу S_λ: S[idx(v), idx(pa v)] = λ_v.
    :param tree: DirectedTree
    :param weights: Словарь метка -> вес, определённый на всех некорневых вершинах.
    :return: ShiftMatrix
    :raises WeightError: Если веса не согласованы с деревом.
    """
    weights = normalize_weights(tree, weights)
    n = tree.size
    matrix = np.zeros((n, n), dtype=complex)
    for v, weight in weights.items():
        matrix[tree.index[v], tree.index[tree.parent(v)]] = weight
    return ShiftMatrix(tree, tuple(tree.vertices), matrix, weights)


def adjoint(shift):
    """
    Сопряжённый оператор: S* e_v = conj(λ_v) e_{pa v}, S* e_root = 0.
    """
    return ShiftMatrix(shift.tree, shift.basis, shift.matrix.conj().T.copy(), shift.weights, not shift.adjoint)


def uniform_weights(tree, value=1.0):
    return {v: complex(value) for v in tree.non_root}


def generation_weights(tree, per_depth):
    """
    Веса, зависящие только от глубины: λ_v = per_depth[depth(v) - 1].
    :param per_depth: Последовательность длины depth(tree).
    :raises WeightError: Если длина не совпадает с глубиной дерева.
    """
    per_depth = list(per_depth)
    if len(per_depth) != tree.depth:
        raise WeightError(f"Нужно {tree.depth} весов поколений, передано {len(per_depth)}.")
    return {v: complex(per_depth[tree.depth_of(v) - 1]) for v in tree.non_root}


def operator_norm_squared(shift):
    """
    ‖S‖² = max_v Σ_{u ∈ Chi(v)} |λ_u|² (матрица S*S диагональна).
    """
    if shift.adjoint:
        return float(np.linalg.norm(shift.matrix, 2) ** 2)
    column_norms = np.sum(np.abs(shift.matrix) ** 2, axis=0)
    return float(column_norms.max()) if column_norms.size else 0.0


@dataclass(frozen=True)
class KernelTable:
    rows: Tuple[Tuple[int, int, int], ...]
    size: int

    def dims(self, m):
        for power, forward, backward in self.rows:
            if power == m:
                return forward, backward
        raise KeyError(m)

    def to_dict(self):
        return {
            "size": self.size,
            "rows": [{"m": m, "dim_ker": a, "dim_ker_adjoint": b} for m, a, b in self.rows],
        }


def kernel_table(shift, max_power=None, rank_tol=DEFAULT_RANK_TOL):
    """
    Размерности ker S^m и ker S*^m для m = 1..max_power.
    :param shift: ShiftMatrix или квадратная матрица.
    :param max_power: По умолчанию depth + 1 (для произвольной матрицы n).
    :param rank_tol: Относительный порог численного ранга.
    :return: KernelTable
    """
    matrix = shift.matrix if isinstance(shift, ShiftMatrix) else np.asarray(shift, dtype=complex)
    n = matrix.shape[0]
    if max_power is None:
        max_power = shift.tree.depth + 1 if isinstance(shift, ShiftMatrix) else max(n, 1)
    if max_power < 1:
        raise ValueError("max_power должен быть не меньше 1.")
    rows = []
    power = np.eye(n, dtype=complex)
    adjoint_matrix = matrix.conj().T
    adjoint_power = np.eye(n, dtype=complex)
    for m in range(1, max_power + 1):
        power = power @ matrix
        adjoint_power = adjoint_power @ adjoint_matrix
        rows.append((m, nullity(power, rank_tol), nullity(adjoint_power, rank_tol)))
    return KernelTable(tuple(rows), n)


def jordan_block_sizes(table):
    """
    Размеры жордановых блоков нильпотентной матрицы по цепочке размерностей ядер:
    число блоков размера ≥ k равно d_k - d_{k-1}.
    :return: Список размеров по убыванию.
    """
    previous = 0
    at_least = []
    for _, dim, _ in table.rows:
        at_least.append(dim - previous)
        previous = dim
    sizes = []
    for k, count in enumerate(at_least, start=1):
        following = at_least[k] if k < len(at_least) else 0
        sizes += [k] * (count - following)
    return sorted(sizes, reverse=True)


def positivize_weights(tree, weights):
    """
    Калибровка к положительным весам: d_root = 1, d_v = d_{pa v}·λ_v/|λ_v|, тогда D* S_λ D = S_{|λ|}.
    :return: Кортеж (положительные веса, вектор фаз d в базисе дерева, невязка ‖D* S_λ D − S_{|λ|}‖_F).
    :raises WeightError: Если среди весов есть ноль.
    """
    weights = normalize_weights(tree, weights)
    for v, weight in weights.items():
        if weight == 0:
            raise WeightError(f"Нулевой вес у вершины {v}: калибровка невозможна.", v)
    phases = np.ones(tree.size, dtype=complex)
    for v in tree.vertices:
        if v == tree.root:
            continue
        weight = weights[v]
        phases[tree.index[v]] = phases[tree.index[tree.parent(v)]] * weight / abs(weight)
    positive = {v: complex(abs(w)) for v, w in weights.items()}
    gauge = np.diag(phases)
    residual = float(np.linalg.norm(gauge.conj().T @ build_shift(tree, weights).matrix @ gauge
                                    - build_shift(tree, positive).matrix, "fro"))
    return positive, phases, residual


def weights_to_document(weights):
    return {label: complex_to_pair(value) for label, value in weights.items()}


def matrix_dump(shift):
    """
    {"basis": [...], "matrix": [[[re, im], ...], ...]} построчно.
    """
    return {"basis": list(shift.basis), "matrix": matrix_to_pairs(shift.matrix), "adjoint": shift.adjoint}
