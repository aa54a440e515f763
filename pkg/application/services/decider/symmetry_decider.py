"""
symmetry_decider.py
Решающая процедура для комплексной симметричности конечной матрицы сдвига.

Порядок проверок: препятствие по размерностям ядер, препятствие по следам слов от T и T*, пространство решений
уравнения Сильвестра и поиск унитарной матрицы в нём. Ответ CS выдаётся только с проверенным сертификатом,
ответ NotCS только с препятствием, которое можно пересчитать по одной матрице T; иначе Undetermined.
"""

import itertools
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from application.services.decider.unitary_search import UnitarySearch
from application.services.operators.conjugation import Conjugation, verify_c_symmetry
from application.services.operators.shift_operator import jordan_block_sizes, kernel_table
from utils.config import (
    DEFAULT_RANK_TOL, DEFAULT_RESTARTS, DEFAULT_SEED, DEFAULT_TOL, DEFAULT_WORD_LEN, DEFAULT_WORKERS,
)
from utils.linalg import frobenius, kernel_basis
from utils.logs.logger import logger

CS = "cs"
NOT_CS = "not_cs"
UNDETERMINED = "undetermined"

LETTERS = ("T", "T*")


@dataclass(frozen=True)
class Obstruction:
    """
    Препятствие к комплексной симметричности: kind in {kernel_dim, word_trace, empty_sylvester_space}.
    """
    kind: str
    witness: dict

    def to_dict(self):
        return {"kind": self.kind, "witness": self.witness}


@dataclass(frozen=True)
class DecideOptions:
    tol: float = DEFAULT_TOL
    rank_tol: float = DEFAULT_RANK_TOL
    seed: int = DEFAULT_SEED
    restarts: int = DEFAULT_RESTARTS
    word_len: int = DEFAULT_WORD_LEN
    workers: int = DEFAULT_WORKERS

    def to_dict(self):
        return {"tol": self.tol, "rank_tol": self.rank_tol, "restarts": self.restarts, "word_len": self.word_len}


@dataclass
class Verdict:
    verdict: str
    certificate: Optional[Conjugation] = None
    obstruction: Optional[Obstruction] = None
    diagnostics: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    options: dict = field(default_factory=dict)
    elapsed: float = field(default=0.0, compare=False)

    @property
    def is_cs(self):
        return self.verdict == CS

    @property
    def is_not_cs(self):
        return self.verdict == NOT_CS

    def to_document(self, include_certificate=True):
        """
        JSON-документ вердикта. Время работы в документ не входит, чтобы отчёты совпадали побайтно.
        """
        document = {
            "verdict": self.verdict,
            "residuals": self.residuals,
            "seed": self.seed,
            "options": self.options,
            "diagnostics": self.diagnostics,
        }
        if self.certificate is not None and include_certificate:
            document["certificate"] = self.certificate.to_document()
        if self.obstruction is not None:
            document["obstruction"] = self.obstruction.to_dict()
        return document


def _matrix(T):
    return np.asarray(getattr(T, "matrix", T), dtype=complex)


def kernel_obstruction(T, rank_tol=DEFAULT_RANK_TOL):
    """
    Наименьшая степень m ≤ n, при которой dim ker T^m ≠ dim ker T*^m.
    :return: Кортеж (m, dim ker T^m, dim ker T*^m) или None.
    """
    matrix = _matrix(T)
    table = kernel_table(matrix, max(matrix.shape[0], 1), rank_tol)
    for m, forward, backward in table.rows:
        if forward != backward:
            return m, forward, backward
    return None


def word_matrix(word, T):
    """
    Значение слова над {T, T*}: произведение букв слева направо; буква 0 - T, буква 1 - T*.
    """
    matrix = _matrix(T)
    letters = (matrix, matrix.conj().T)
    result = np.eye(matrix.shape[0], dtype=complex)
    for letter in word:
        result = result @ letters[letter]
    return result


def word_traces(word, T):
    return complex(np.trace(word_matrix(word, T))), complex(np.trace(word_matrix(tuple(reversed(word)), T)))


def trace_scale(T, length):
    return max(1.0, frobenius(_matrix(T)) ** length)


def word_to_text(word):
    return " ".join(LETTERS[letter] for letter in word)


def word_trace_obstruction(T, max_len=DEFAULT_WORD_LEN, tol=DEFAULT_TOL):
    """
    Первое слово (по длине, затем лексикографически, T < T*), для которого tr w(T, T*) и tr w_rev(T, T*)
    отличаются больше чем на 10·tol·max(1, ‖T‖_F^len).
    :return: Кортеж (слово как кортеж 0/1, след слова, след перевёрнутого слова) или None.
    """
    if max_len < 2:
        raise ValueError("Максимальная длина слова должна быть не меньше 2.")
    matrix = _matrix(T)
    for length in range(2, max_len + 1):
        scale = trace_scale(matrix, length)
        for word in itertools.product((0, 1), repeat=length):
            backward = tuple(reversed(word))
            if backward <= word:
                continue
            forward_trace, backward_trace = word_traces(word, matrix)
            if abs(forward_trace - backward_trace) > 10 * tol * scale:
                return word, forward_trace, backward_trace
    return None


def sylvester_space(T, rank_tol=DEFAULT_RANK_TOL):
    """
    Ортонормированный (по Фробениусу) базис пространства {A : A = Aᵀ, TA = ATᵀ}.
    Симметричные матрицы параметризуются базисом E_ii, (E_ij + E_ji)/√2, уравнение решается через ядро.
    :return: Массив формы (d, n, n).
    """
    matrix = _matrix(T)
    n = matrix.shape[0]
    symmetric_basis = []
    for i in range(n):
        for j in range(i, n):
            E = np.zeros((n, n), dtype=complex)
            if i == j:
                E[i, i] = 1.0
            else:
                E[i, j] = E[j, i] = 1.0 / np.sqrt(2.0)
            symmetric_basis.append(E)
    if not symmetric_basis:
        return np.zeros((0, 0, 0), dtype=complex)
    stacked = np.array(symmetric_basis)
    operator = np.column_stack([(matrix @ E - E @ matrix.T).ravel() for E in stacked])
    coefficients = kernel_basis(operator, rank_tol)
    return np.einsum("kd,kij->dij", coefficients, stacked)


def recheck_obstruction(T, obstruction, tol=DEFAULT_TOL, rank_tol=DEFAULT_RANK_TOL):
    """
    Пересчитывает препятствие по одной матрице T.
    :return: True, если препятствие подтверждается.
    """
    matrix = _matrix(T)
    witness = obstruction.witness
    if obstruction.kind == "kernel_dim":
        m = witness["m"]
        table = kernel_table(matrix, m, rank_tol)
        forward, backward = table.dims(m)
        return forward != backward
    if obstruction.kind == "word_trace":
        word = tuple(witness["word"])
        forward_trace, backward_trace = word_traces(word, matrix)
        return abs(forward_trace - backward_trace) > 10 * tol * trace_scale(matrix, len(word))
    if obstruction.kind == "empty_sylvester_space":
        return sylvester_space(matrix, rank_tol).shape[0] == 0
    return False


def decide_cs(T, options=None, basis=None):
    """
    Решает, является ли T комплексно симметричной.
    :param T: ShiftMatrix или квадратная матрица.
    :param options: DecideOptions
    :param basis: Метки базиса (по умолчанию берутся из ShiftMatrix).
    :return: Verdict
    """
    options = options or DecideOptions()
    started = time.perf_counter()
    matrix = _matrix(T)
    basis = tuple(basis if basis is not None else getattr(T, "basis", ()))
    n = matrix.shape[0]

    table = kernel_table(matrix, max(n, 1), options.rank_tol)
    diagnostics = {
        "size": n,
        "kernel_table": table.to_dict()["rows"],
        "jordan_block_sizes": jordan_block_sizes(table),
    }

    def finish(verdict, **kwargs):
        return Verdict(verdict, diagnostics=diagnostics, seed=options.seed, options=options.to_dict(),
                       elapsed=time.perf_counter() - started, **kwargs)

    found = kernel_obstruction(matrix, options.rank_tol)
    if found is not None:
        m, forward, backward = found
        logger.log(f"Препятствие по ядрам: m = {m}, размерности {forward} и {backward}.", "INFO")
        return finish(NOT_CS, obstruction=Obstruction("kernel_dim", {
            "m": m, "dim_ker": forward, "dim_ker_adjoint": backward}))

    found = word_trace_obstruction(matrix, options.word_len, options.tol)
    if found is not None:
        word, forward_trace, backward_trace = found
        logger.log(f"Препятствие по следам слов: {word_to_text(word)}.", "INFO")
        return finish(NOT_CS, obstruction=Obstruction("word_trace", {
            "word": list(word),
            "word_text": word_to_text(word),
            "trace": forward_trace,
            "trace_reversed": backward_trace,
            "scale": trace_scale(matrix, len(word)),
        }))

    space = sylvester_space(matrix, options.rank_tol)
    diagnostics["sylvester_dimension"] = int(space.shape[0])
    if space.shape[0] == 0:
        return finish(NOT_CS, obstruction=Obstruction("empty_sylvester_space", {"dimension": 0}))

    outcome = UnitarySearch(space, matrix, options.tol).search(options.seed, options.restarts, options.workers)
    diagnostics["best_unitary_residual"] = outcome.best_residual
    diagnostics["restarts_run"] = outcome.restarts_run
    if outcome.conjugation is None:
        return finish(UNDETERMINED)

    certificate = Conjugation(outcome.conjugation.A, basis)
    report = verify_c_symmetry(matrix, certificate, options.tol)
    diagnostics["certificate_restart"] = outcome.restart
    return finish(CS, certificate=certificate, residuals={
        "intertwining": report.residual,
        "unitary": certificate.residual_unitary,
        "symmetric": certificate.residual_symmetric,
    })
