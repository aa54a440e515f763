"""
family_theorems.py
Семейства T_{κ,θ} (ствол и две одинаковые ветви) и T²_κ (полное двоичное дерево) с весами, постоянными по
поколениям.

Здесь реализованы:
- условия комплексной симметричности в той форме, в какой они напечатаны (two_branch_condition для T_{κ,θ},
  binary_condition для T²_κ), с пропуском индексов, выходящих за пределы весов;
- явное сопряжение для T_{κ,θ} по рекуррентным соотношениям для фаз δ_j, γ_j;
- разложение оператора в ортогональную сумму усечённых сдвигов (цепочек) через симметризованный базис;
- сопряжение, собранное из отражений цепочек (палиндромы и зеркальные пары).
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import block_diag

from application.services.operators.conjugation import (
    Conjugation, conjugate_by_gauge, from_basis_images, make_conjugation, verify_c_symmetry,
)
from application.services.operators.shift_operator import build_shift, normalize_weights, positivize_weights
from application.services.trees.tree_core import (
    generate_binary, generate_path, generate_two_branch, make_label,
)
from utils.config import DEFAULT_TOL
from utils.errors import ConjugationError, FamilyError, PhaseRecursionError
from utils.linalg import frobenius
from utils.logs.logger import logger

SQRT2 = math.sqrt(2.0)


def same_modulus(a, b, tol=DEFAULT_TOL):
    return math.isclose(abs(a), abs(b), rel_tol=tol, abs_tol=tol)


@dataclass(frozen=True)
class TwoBranchWeights:
    """
    Веса T_{κ,θ}: ствол λ_{−κ+1..0} (вес вершины −k хранится как λ_{−k}) и общие веса ветвей λ_1..λ_θ.
    """
    kappa: int
    theta: int
    trunk: Tuple[complex, ...]
    branch: Tuple[complex, ...]

    def __post_init__(self):
        if len(self.trunk) != self.kappa or len(self.branch) != self.theta:
            raise FamilyError(f"Для T_{{κ,θ}} с κ = {self.kappa}, θ = {self.theta} нужно {self.kappa} весов ствола и "
                              f"{self.theta} весов ветвей, передано {len(self.trunk)} и {len(self.branch)}.")

    def has(self, j):
        return -self.kappa + 1 <= j <= self.theta

    def lam(self, j):
        """
        λ_j для j = −κ+1..θ.
        """
        if not self.has(j):
            raise IndexError(j)
        if j <= 0:
            return self.trunk[j + self.kappa - 1]
        return self.branch[j - 1]

    @property
    def values(self):
        return list(self.trunk) + list(self.branch)

    def to_assignment(self, tree=None):
        weights = {str(j): self.lam(j) for j in range(-self.kappa + 1, 1)}
        for branch in (1, 2):
            for j in range(1, self.theta + 1):
                weights[make_label(branch, j)] = self.lam(j)
        return weights


def two_branch_weights_from_generations(kappa, theta, values):
    """
    :param values: λ_{−κ+1}, ..., λ_0, λ_1, ..., λ_θ подряд.
    """
    values = [complex(v) for v in values]
    if len(values) != kappa + theta:
        raise FamilyError(f"Для T_{{κ,θ}} нужно κ + θ = {kappa + theta} весов, передано {len(values)}.")
    return TwoBranchWeights(kappa, theta, tuple(values[:kappa]), tuple(values[kappa:]))


def two_branch_weights_from_assignment(kappa, theta, weights, tol=DEFAULT_TOL):
    """
    Обратное преобразование; проверяет равенство λ_{1,j} = λ_{2,j}.
    :raises FamilyError: Если веса двух ветвей различаются.
    """
    trunk = tuple(complex(weights[str(j)]) for j in range(-kappa + 1, 1))
    branch = []
    for j in range(1, theta + 1):
        first, second = complex(weights[make_label(1, j)]), complex(weights[make_label(2, j)])
        if abs(first - second) > tol * max(1.0, abs(first)):
            raise FamilyError(f"Веса ветвей различаются на поколении {j}: {first} и {second}.")
        branch.append(first)
    return TwoBranchWeights(kappa, theta, trunk, tuple(branch))


@dataclass(frozen=True)
class BinaryWeights:
    """
    Веса T²_κ: λ_k для всех вершин поколения k = 1..κ.
    """
    kappa: int
    values: Tuple[complex, ...]

    def __post_init__(self):
        if len(self.values) != self.kappa:
            raise FamilyError(f"Для T²_κ с κ = {self.kappa} нужно {self.kappa} весов, передано {len(self.values)}.")

    def has(self, k):
        return 1 <= k <= self.kappa

    def lam(self, k):
        if not self.has(k):
            raise IndexError(k)
        return self.values[k - 1]

    def to_assignment(self, tree=None):
        weights = {}
        for k in range(1, self.kappa + 1):
            for l in range(1, 2 ** k + 1):
                weights[make_label(k, l)] = self.lam(k)
        return weights


def binary_weights_from_generations(kappa, values):
    return BinaryWeights(kappa, tuple(complex(v) for v in values))


def binary_weights_from_assignment(kappa, weights, tol=DEFAULT_TOL):
    values = []
    for k in range(1, kappa + 1):
        generation = [complex(weights[make_label(k, l)]) for l in range(1, 2 ** k + 1)]
        if any(abs(w - generation[0]) > tol * max(1.0, abs(generation[0])) for w in generation):
            raise FamilyError(f"Веса поколения {k} двоичного дерева не совпадают.")
        values.append(generation[0])
    return BinaryWeights(kappa, tuple(values))


def _clause(applies, failures, skipped=()):
    return {"applies": applies, "holds": (not failures) if applies else True,
            "failures": list(failures), "skipped": list(skipped)}


def two_branch_condition(kappa, theta, weights, tol=DEFAULT_TOL):
    """
    Условие комплексной симметричности для T_{κ,θ} в напечатанной форме:
    (i)   |λ_{1+j}| = |λ_{θ+1−j}|, j = 1..θ−1;
    (ii)  при θ − κ = 1: |λ_{−κ+j}| = |λ_{θ−j+1}|, j = 1..κ+θ;
    (iii) при θ − κ ≠ 1: √2|λ_1| = |λ_{θ−κ}| и |λ_{−κ+j}| = |λ_{θ−j+1}|, j ∈ {1..κ+θ} без κ.
    Индексы, для которых λ не определено, пропускаются и записываются в skipped.
    :param weights: TwoBranchWeights или последовательность λ_{−κ+1..θ}.
    :return: Словарь {"satisfied", "clauses", "skipped"}.
    """
    if not isinstance(weights, TwoBranchWeights):
        weights = two_branch_weights_from_generations(kappa, theta, weights)
    if weights.kappa != kappa or weights.theta != theta:
        raise FamilyError("Параметры весов не совпадают с κ и θ.")
    skipped = []

    def compare(j, left, right, failures, left_factor=1.0):
        if not (weights.has(left) and weights.has(right)):
            skipped.append({"j": j, "indices": [left, right]})
            logger.log(f"Условие для T_{{{kappa},{theta}}}: индекс j = {j} ссылается на λ_{left} или λ_{right} "
                       f"вне диапазона, пропущен.", "DEBUG")
            return
        if not math.isclose(left_factor * abs(weights.lam(left)), abs(weights.lam(right)), rel_tol=tol, abs_tol=tol):
            failures.append(j)

    first = []
    for j in range(1, theta):
        compare(j, 1 + j, theta + 1 - j, first)
    clauses = {"i": _clause(True, first)}

    second = []
    if theta - kappa == 1:
        for j in range(1, kappa + theta + 1):
            compare(j, -kappa + j, theta - j + 1, second)
    clauses["ii"] = _clause(theta - kappa == 1, second)

    third = []
    if theta - kappa != 1:
        compare(0, 1, theta - kappa, third, left_factor=SQRT2)
        for j in range(1, kappa + theta + 1):
            if j == kappa:
                continue
            compare(j, -kappa + j, theta - j + 1, third)
    clauses["iii"] = _clause(theta - kappa != 1, third)

    satisfied = all(clause["holds"] for clause in clauses.values())
    return {"satisfied": satisfied, "clauses": clauses, "skipped": skipped}


def binary_condition(kappa, weights, tol=DEFAULT_TOL):
    """
    Напечатанное условие для T²_κ: 2|λ_{l+1}| = |λ_{κ−l}|, l = 0..κ. Значения l, при которых нужен λ_0 или λ_{κ+1},
    пропускаются.
    :return: Словарь {"satisfied", "clauses", "skipped", "first_failure"}.
    """
    if not isinstance(weights, BinaryWeights):
        weights = binary_weights_from_generations(kappa, weights)
    if weights.kappa != kappa:
        raise FamilyError("Параметр весов не совпадает с κ.")
    clauses, skipped = {}, []
    for l in range(0, kappa + 1):
        if not (weights.has(l + 1) and weights.has(kappa - l)):
            skipped.append(l)
            logger.log(f"Условие для T²_{kappa}: l = {l} ссылается на λ_{l + 1} или λ_{kappa - l} вне диапазона, "
                       f"пропущено.", "DEBUG")
            continue
        clauses[str(l)] = math.isclose(2 * abs(weights.lam(l + 1)), abs(weights.lam(kappa - l)),
                                       rel_tol=tol, abs_tol=tol)
    failures = [int(l) for l, holds in clauses.items() if not holds]
    return {
        "satisfied": not failures,
        "clauses": clauses,
        "skipped": skipped,
        "first_failure": failures[0] if failures else None,
    }


def describe_condition(result):
    """
    Короткая строка для CLI: "satisfied" или "not satisfied (l=1)".
    """
    if result["satisfied"]:
        return "satisfied"
    if "first_failure" in result:
        return f"not satisfied (l={result['first_failure']})"
    failed = [f"{name}: j={clause['failures'][0]}" for name, clause in result["clauses"].items()
              if clause["applies"] and clause["failures"]]
    return f"not satisfied ({'; '.join(failed)})"


def binary_conjugation_chain(kappa, weights=None):
    """
    Нормировка, которую навязывает сопряжение C(ℂ f_{κ−l}) = ℂ f_l: |α_l| = ‖f_l‖/‖f_{κ−l}‖ = √(2^{2l−κ}).
    :return: Список словарей по l = 0..κ.
    """
    chain = []
    for l in range(0, kappa + 1):
        entry = {"l": l, "source": f"f_{kappa - l}", "target": f"f_{l}",
                 "alpha_modulus": math.sqrt(2.0 ** (2 * l - kappa))}
        if weights is not None:
            if not isinstance(weights, BinaryWeights):
                weights = binary_weights_from_generations(kappa, weights)
            if weights.has(l + 1) and weights.has(kappa - l):
                entry["ratio"] = abs(weights.lam(kappa - l)) / abs(weights.lam(l + 1))
        chain.append(entry)
    return chain


def palindrome_condition(weights, tol=DEFAULT_TOL):
    """
    |w_j| = |w_{n+1−j}| для всех j.
    """
    weights = list(weights)
    return all(same_modulus(weights[j], weights[-1 - j], tol) for j in range(len(weights) // 2))


@dataclass(frozen=True, eq=False)
class SymmetrizedBasis:
    """
    Базис f_{−κ..θ}, g_{1..θ} для T_{κ,θ}: f_{−j} = e_{−j}, f_j = (e_{1,j}+e_{2,j})/√2, g_j = (e_{1,j}−e_{2,j})/√2.
    """
    f: Dict[int, np.ndarray]
    g: Dict[int, np.ndarray]
    basis: Tuple[str, ...]

    @property
    def matrix(self):
        return np.column_stack([self.f[j] for j in sorted(self.f)] + [self.g[j] for j in sorted(self.g)])

    def orthonormality_residual(self):
        U = self.matrix
        return frobenius(U.conj().T @ U - np.eye(U.shape[1]))


def two_branch_symmetrized_basis(kappa, theta, tree=None):
    tree = tree or generate_two_branch(kappa, theta)
    n = tree.size

    def unit(label):
        e = np.zeros(n, dtype=complex)
        e[tree.index[label]] = 1.0
        return e

    f = {-j: unit(str(-j)) for j in range(0, kappa + 1)}
    g = {}
    for j in range(1, theta + 1):
        first, second = unit(make_label(1, j)), unit(make_label(2, j))
        f[j] = (first + second) / SQRT2
        g[j] = (first - second) / SQRT2
    return SymmetrizedBasis(f, g, tuple(tree.vertices))


def binary_aggregate_vectors(kappa, tree=None):
    """
    f_k = Σ_{l ∈ J_{2^k}} e_{k,l}, k = 0..κ (без нормировки, ‖f_k‖² = 2^k).
    """
    tree = tree or generate_binary(kappa)
    vectors = {}
    for k in range(0, kappa + 1):
        vector = np.zeros(tree.size, dtype=complex)
        for l in range(1, 2 ** k + 1):
            vector[tree.index[make_label(k, l)]] = 1.0
        vectors[k] = vector
    return vectors


def chain_matrix(chain):
    """
    Усечённый сдвиг с весами chain: S e_i = w_{i+1} e_{i+1}; пустая цепочка даёт нулевой блок 1×1.
    """
    size = len(chain) + 1
    matrix = np.zeros((size, size), dtype=complex)
    for i, weight in enumerate(chain):
        matrix[i + 1, i] = weight
    return matrix


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    """
    Ортогональное разложение: Uᴴ T U = blockdiag(усечённые сдвиги с весами chains).
    """
    U: np.ndarray
    chains: Tuple[Tuple[complex, ...], ...]
    names: Tuple[str, ...] = ()
    T: Optional[np.ndarray] = None
    basis: Tuple[str, ...] = ()

    @classmethod
    def from_chains(cls, chains, names=()):
        chains = tuple(tuple(complex(w) for w in chain) for chain in chains)
        blocks = block_diag(*[chain_matrix(chain) for chain in chains])
        return cls(np.eye(blocks.shape[0], dtype=complex), chains, tuple(names), blocks)

    @property
    def block_matrix(self):
        return block_diag(*[chain_matrix(chain) for chain in self.chains]).astype(complex)

    @property
    def offsets(self):
        offsets, position = [], 0
        for chain in self.chains:
            offsets.append(position)
            position += len(chain) + 1
        return offsets

    def residual(self):
        if self.T is None:
            return 0.0
        return frobenius(self.U.conj().T @ self.T @ self.U - self.block_matrix)

    def to_dict(self):
        return {"chains": [list(chain) for chain in self.chains], "names": list(self.names),
                "residual": self.residual()}


def _two_branch_sizes(tree):
    depth, n = tree.depth, tree.size
    theta = n - 1 - depth
    return depth - theta, theta


def detect_family(tree):
    """
    Определяет семейство дерева по структуре и меткам.
    :return: Кортеж (семейство, параметры) или (None, {}).
    """
    if tree.family in ("path", "two_branch", "binary"):
        if tree.family == "path":
            return "path", {"n": tree.size}
        if tree.family == "two_branch":
            kappa, theta = _two_branch_sizes(tree)
            return "two_branch", {"kappa": kappa, "theta": theta}
        return "binary", {"kappa": tree.depth}
    candidates = []
    if all(len(tree.children(v)) <= 1 for v in tree.vertices):
        candidates.append(("path", {"n": tree.size}, lambda: generate_path(tree.size)))
    kappa, theta = _two_branch_sizes(tree)
    if kappa >= 0 and theta >= 1:
        candidates.append(("two_branch", {"kappa": kappa, "theta": theta},
                           lambda: generate_two_branch(kappa, theta)))
    if tree.depth >= 2 and tree.size == 2 ** (tree.depth + 1) - 1:
        candidates.append(("binary", {"kappa": tree.depth}, lambda: generate_binary(tree.depth)))
    for family, params, make in candidates:
        if make() == tree:
            return family, params
    return None, {}


def decompose_equal_weight_tree(tree, weights, tol=DEFAULT_TOL):
    """
    Разложение S_λ в ортогональную сумму усечённых сдвигов.
    T_{κ,θ}: цепочка (λ_{−κ+1},…,λ_0, √2λ_1, λ_2,…,λ_θ) на f_{−κ..θ} и цепочка (λ_2,…,λ_θ) на g_{1..θ}.
    T²_κ: цепочка (√2λ_1,…,√2λ_κ) на нормированных f_k и для каждой ветвящейся вершины уровня k цепочка
    (√2λ_{k+2},…,√2λ_κ) на нормированных разностях потомков левого и правого ребёнка.
    Путь: одна цепочка из его весов.
    :raises FamilyError: Дерево вне поддерживаемых семейств или веса не постоянны по поколениям.
    """
    family, params = detect_family(tree)
    weights = normalize_weights(tree, weights)
    T = build_shift(tree, weights).matrix
    if family == "path":
        chain = tuple(weights[str(i)] for i in range(1, tree.size))
        return BlockDecomposition(np.eye(tree.size, dtype=complex), (chain,), ("path",), T, tuple(tree.vertices))

    if family == "two_branch":
        kappa, theta = params["kappa"], params["theta"]
        w = two_branch_weights_from_assignment(kappa, theta, weights, tol)
        basis = two_branch_symmetrized_basis(kappa, theta, tree)
        f_chain = [w.lam(j) for j in range(-kappa + 1, 1)] + [SQRT2 * w.lam(1)] + \
                  [w.lam(j) for j in range(2, theta + 1)]
        g_chain = [w.lam(j) for j in range(2, theta + 1)]
        return BlockDecomposition(basis.matrix, (tuple(f_chain), tuple(g_chain)), ("f", "g"), T,
                                  tuple(tree.vertices))

    if family == "binary":
        kappa = params["kappa"]
        w = binary_weights_from_assignment(kappa, weights, tol)
        aggregates = binary_aggregate_vectors(kappa, tree)
        columns = [aggregates[k] / np.sqrt(2.0 ** k) for k in range(kappa + 1)]
        chains = [tuple(SQRT2 * w.lam(k) for k in range(1, kappa + 1))]
        names = ["f"]
        for k in range(0, kappa):
            for l in range(1, 2 ** k + 1):
                for m in range(k + 1, kappa + 1):
                    span = 2 ** (m - k - 1)
                    left_start = (2 * l - 2) * span + 1
                    vector = np.zeros(tree.size, dtype=complex)
                    for offset in range(span):
                        vector[tree.index[make_label(m, left_start + offset)]] = 1.0
                        vector[tree.index[make_label(m, left_start + span + offset)]] = -1.0
                    columns.append(vector / np.sqrt(2.0 * span))
                chains.append(tuple(SQRT2 * w.lam(m) for m in range(k + 2, kappa + 1)))
                names.append(make_label(k, l))
        return BlockDecomposition(np.column_stack(columns), tuple(chains), tuple(names), T, tuple(tree.vertices))

    raise FamilyError("Разложение поддерживается только для пути, T_{κ,θ} и T²_κ.")


def _chain_gauge(chain):
    phases = [1.0 + 0j]
    for weight in chain:
        phases.append(phases[-1] * (weight / abs(weight) if weight != 0 else 1.0))
    return np.array(phases, dtype=complex)


def reversal_pairing_cs(decomposition, T=None, tol=DEFAULT_TOL):
    """
    Сопряжение из отражений: палиндромная цепочка отражается сама в себя, цепочка и её зеркальная пара
    отражаются друг в друга. Ответ перепроверяется на T.
    :param decomposition: BlockDecomposition.
    :param T: Матрица оператора (по умолчанию берётся из разложения).
    :return: Conjugation или None.
    """
    chains = decomposition.chains
    if any(weight == 0 for chain in chains for weight in chain):
        return None
    partner = {}
    for i, chain in enumerate(chains):
        if palindrome_condition(chain, tol):
            partner[i] = i
    for i, chain in enumerate(chains):
        if i in partner:
            continue
        for j in range(i + 1, len(chains)):
            other = chains[j]
            if j in partner or len(other) != len(chain):
                continue
            if all(same_modulus(a, b, tol) for a, b in zip(chain, reversed(other))):
                partner[i], partner[j] = j, i
                break
        else:
            return None

    size = decomposition.U.shape[1]
    block = np.zeros((size, size), dtype=complex)
    offsets = decomposition.offsets
    for i, j in partner.items():
        length = len(chains[i]) + 1
        flip = np.fliplr(np.eye(length))
        Di, Dj = np.diag(_chain_gauge(chains[i])), np.diag(_chain_gauge(chains[j]))
        block[offsets[i]:offsets[i] + length, offsets[j]:offsets[j] + length] = Di @ flip @ Dj

    U = decomposition.U
    A = U @ block @ U.T
    matrix = decomposition.T if T is None else np.asarray(getattr(T, "matrix", T), dtype=complex)
    try:
        conjugation = make_conjugation(A, decomposition.basis, tol)
    except ConjugationError as e:
        logger.log(f"Сопряжение из отражений не прошло проверку: {e}", "WARNING")
        return None
    if matrix is not None and not verify_c_symmetry(matrix, conjugation, tol).passed:
        logger.log("Сопряжение из отражений не сплетает оператор.", "WARNING")
        return None
    return conjugation


def phase_sequences(kappa, theta, weights, tol=DEFAULT_TOL):
    """
    Фазы из рекуррентных соотношений при δ_0 = γ_0 = 1:
    δ_j = δ_{j−1} λ_{1+j} / λ_{θ−j+1}, j = 1..θ−1;
    γ_j = γ_{j−1} ν_j λ_{−κ+j} / (μ_j λ_{θ−j+1}), j = 1..κ+θ, μ_j = √2 при j = θ, ν_j = √2 при j = κ+1.
    :raises PhaseRecursionError: Если какое-то δ_j или γ_j не по модулю 1.
    """
    delta = [1.0 + 0j]
    for j in range(1, theta):
        value = delta[-1] * weights.lam(1 + j) / weights.lam(theta - j + 1)
        if abs(abs(value) - 1.0) > tol:
            raise PhaseRecursionError(f"Шаг j = {j} рекурсии для δ даёт |δ_{j}| = {abs(value):.6g} ≠ 1.",
                                      "delta", j, abs(value))
        delta.append(value)
    gamma = [1.0 + 0j]
    for j in range(1, kappa + theta + 1):
        mu = SQRT2 if j == theta else 1.0
        nu = SQRT2 if j == kappa + 1 else 1.0
        value = gamma[-1] * nu * weights.lam(-kappa + j) / (mu * weights.lam(theta - j + 1))
        if abs(abs(value) - 1.0) > tol:
            raise PhaseRecursionError(f"Шаг j = {j} рекурсии для γ даёт |γ_{j}| = {abs(value):.6g} ≠ 1.",
                                      "gamma", j, abs(value))
        gamma.append(value)
    return delta, gamma


def two_branch_conjugation(kappa, theta, weights, tol=DEFAULT_TOL):
    """
    Явное сопряжение для T_{κ,θ}: после калибровки к положительным весам C g_{1+j} = δ_j g_{θ−j},
    C f_{−κ+j} = γ_j f_{θ−j}; затем сопряжение переносится обратно на исходные комплексные веса.
    :param weights: TwoBranchWeights или последовательность λ_{−κ+1..θ}.
    :return: Conjugation, прошедшее verify_c_symmetry(S_λ, C).
    :raises PhaseRecursionError: Рекурсия для фаз ломает унимодулярность.
    :raises ConjugationError: Построенная матрица не сплетает S_λ.
    """
    if not isinstance(weights, TwoBranchWeights):
        weights = two_branch_weights_from_generations(kappa, theta, weights)
    tree = generate_two_branch(kappa, theta)
    assignment = weights.to_assignment(tree)
    positive_assignment, phases, _ = positivize_weights(tree, assignment)
    positive = two_branch_weights_from_assignment(kappa, theta, positive_assignment, tol)

    delta, gamma = phase_sequences(kappa, theta, positive, tol)
    basis = two_branch_symmetrized_basis(kappa, theta, tree)
    images = []
    for j in range(0, theta):
        images.append((basis.g[1 + j], delta[j] * basis.g[theta - j]))
    for j in range(0, kappa + theta + 1):
        images.append((basis.f[-kappa + j], gamma[j] * basis.f[theta - j]))
    positive_conjugation = from_basis_images(images, tuple(tree.vertices), tol)
    conjugation = conjugate_by_gauge(positive_conjugation, phases, tol)

    report = verify_c_symmetry(build_shift(tree, assignment), conjugation, tol)
    if not report.passed:
        raise ConjugationError(f"Построенное сопряжение не сплетает S_λ: невязка {report.residual:.3e}.",
                               conjugation.residual_unitary, conjugation.residual_symmetric)
    return conjugation


def chain_palindrome_relations(family, params):
    """
    Соотношения модулей, при которых все цепочки разложения палиндромны.
    Соотношение (a, b, ratio) означает |λ_a| = ratio·|λ_b|; индексы как в TwoBranchWeights/BinaryWeights.
    """
    relations = []
    if family == "two_branch":
        kappa, theta = params["kappa"], params["theta"]
        factor = {j: (SQRT2 if j == 1 else 1.0) for j in range(-kappa + 1, theta + 1)}
        positions = list(range(-kappa + 1, theta + 1))
        for p in range(len(positions) // 2):
            a, b = positions[p], positions[-1 - p]
            relations.append((a, b, factor[b] / factor[a]))
        g_positions = list(range(2, theta + 1))
        for p in range(len(g_positions) // 2):
            relations.append((g_positions[p], g_positions[-1 - p], 1.0))
    elif family == "binary":
        kappa = params["kappa"]
        for k in range(1, kappa // 2 + 1):
            relations.append((k, kappa + 1 - k, 1.0))
        for k in range(0, kappa - 1):
            g_positions = list(range(k + 2, kappa + 1))
            for p in range(len(g_positions) // 2):
                relations.append((g_positions[p], g_positions[-1 - p], 1.0))
    else:
        raise FamilyError(f"Неизвестное семейство {family}.")
    return relations


def family_tree(family, params):
    if family == "two_branch":
        return generate_two_branch(params["kappa"], params["theta"])
    if family == "binary":
        return generate_binary(params["kappa"])
    raise FamilyError(f"Неизвестное семейство {family}.")


def family_weights(family, params, values):
    if family == "two_branch":
        return two_branch_weights_from_generations(params["kappa"], params["theta"], values)
    if family == "binary":
        return binary_weights_from_generations(params["kappa"], values)
    raise FamilyError(f"Неизвестное семейство {family}.")


def family_condition(family, params, weights, tol=DEFAULT_TOL):
    if family == "two_branch":
        return two_branch_condition(params["kappa"], params["theta"], weights, tol)
    return binary_condition(params["kappa"], weights, tol)
