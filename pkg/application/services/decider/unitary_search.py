"""
unitary_search.py
Поиск симметричной унитарной матрицы в пространстве решений {A = Aᵀ, TA = ATᵀ}.

Каждый перезапуск минимизирует ‖A(c)A(c)* − I‖²_F по единичным векторам коэффициентов c, A(c) = √n Σ c_i B_i:
проектированный градиентный спуск по сфере с правилом Армихо, затем доводка методом Левенберга-Марквардта
(scipy.optimize.least_squares). Перезапуск r использует генератор default_rng([seed, r]); из удачных
перезапусков выбирается перезапуск с наименьшим номером, поэтому последовательный и параллельный режимы
возвращают один и тот же сертификат.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from application.services.operators.conjugation import Conjugation, verify_c_symmetry
from utils.config import (
    ARMIJO_INITIAL_STEP, ARMIJO_MAX_HALVINGS, ARMIJO_SHRINK, ARMIJO_SUFFICIENT_DECREASE,
    DEFAULT_RESTARTS, DEFAULT_SEED, DEFAULT_TOL, GRADIENT_STEPS, POLISH_MAX_NFEV, POLISH_TOL,
)
from utils.linalg import frobenius
from utils.logs.logger import logger


@dataclass(frozen=True)
class RestartResult:
    restart: int
    coefficients: np.ndarray
    residual_unitary: float
    conjugation: Optional[Conjugation] = None


@dataclass(frozen=True)
class SearchOutcome:
    conjugation: Optional[Conjugation]
    restart: Optional[int]
    best_residual: float
    restarts_run: int


class UnitarySearch:
    """
    Многократный поиск унитарной матрицы в линейном пространстве симметричных матриц.
    """

    def __init__(self, space, T, tol=DEFAULT_TOL):
        """
        :param space: Массив формы (d, n, n) с ортонормированным базисом пространства.
        :param T: Матрица оператора, с которой сверяется найденный сертификат.
        :param tol: Допуск на невязки сертификата.
        """
        self.space = np.asarray(space, dtype=complex)
        self.T = np.asarray(T, dtype=complex)
        self.tol = tol
        self.d = self.space.shape[0]
        self.n = self.space.shape[1] if self.d else self.T.shape[0]
        self.scale = np.sqrt(self.n)

    def matrix(self, c):
        return self.scale * np.tensordot(c, self.space, axes=1)

    def objective(self, c):
        A = self.matrix(c)
        R = A @ A.conj().T - np.eye(self.n)
        return float(np.real(np.vdot(R, R))), A, R

    def gradient(self, A, R):
        # g_k = 4√n tr(B_k* R A)
        return 4.0 * self.scale * np.einsum("kij,ij->k", self.space.conj(), R @ A)

    def descend(self, c):
        value, A, R = self.objective(c)
        for _ in range(GRADIENT_STEPS):
            if value <= self.tol ** 2:
                break
            g = self.gradient(A, R)
            g = g - np.real(np.vdot(c, g)) * c
            slope = float(np.real(np.vdot(g, g)))
            if slope <= 1e-30:
                break
            step = ARMIJO_INITIAL_STEP
            for _ in range(ARMIJO_MAX_HALVINGS):
                candidate = c - step * g
                candidate = candidate / np.linalg.norm(candidate)
                new_value, new_A, new_R = self.objective(candidate)
                if new_value <= value - ARMIJO_SUFFICIENT_DECREASE * step * slope:
                    c, value, A, R = candidate, new_value, new_A, new_R
                    break
                step *= ARMIJO_SHRINK
            else:
                break
        return c

    def polish(self, c):
        d, n = self.d, self.n
        identity = np.eye(n)

        def split(x):
            return x[:d] + 1j * x[d:]

        def residual(x):
            A = self.matrix(split(x))
            R = (A @ A.conj().T - identity).ravel()
            return np.concatenate([R.real, R.imag])

        def jacobian(x):
            A = self.matrix(split(x))
            columns = []
            for direction in (self.space, 1j * self.space):
                for E in direction:
                    dR = self.scale * (E @ A.conj().T + A @ E.conj().T)
                    columns.append(np.concatenate([dR.real.ravel(), dR.imag.ravel()]))
            return np.column_stack(columns)

        x0 = np.concatenate([c.real, c.imag])
        result = least_squares(residual, x0, jac=jacobian, method="lm",
                               xtol=POLISH_TOL, ftol=POLISH_TOL, gtol=POLISH_TOL, max_nfev=POLISH_MAX_NFEV)
        return split(result.x)

    def run_restart(self, restart, seed):
        rng = np.random.default_rng([seed, restart])
        c = rng.standard_normal(self.d) + 1j * rng.standard_normal(self.d)
        c = c / np.linalg.norm(c)
        c = self.polish(self.descend(c))
        A = canonical_phase(self.matrix(c))
        residual = frobenius(A @ A.conj().T - np.eye(self.n))
        candidate = Conjugation(A)
        if residual <= self.tol and candidate.residual_symmetric <= self.tol:
            if verify_c_symmetry(self.T, candidate, self.tol).passed:
                return RestartResult(restart, c, residual, candidate)
        return RestartResult(restart, c, residual)

    def search(self, seed=DEFAULT_SEED, restarts=DEFAULT_RESTARTS, workers=1):
        """
        :return: SearchOutcome; conjugation равно None, если ни один перезапуск не дал сертификат.
        """
        if self.d == 0:
            return SearchOutcome(None, None, float("inf"), 0)
        results = []
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as executor:
                results = list(executor.map(lambda r: self.run_restart(r, seed), range(restarts)))
        else:
            for r in range(restarts):
                result = self.run_restart(r, seed)
                results.append(result)
                if result.conjugation is not None:
                    break
        best = min(result.residual_unitary for result in results)
        for result in results:
            if result.conjugation is not None:
                logger.log(f"Сертификат найден на перезапуске {result.restart} (d = {self.d}, n = {self.n}).", "INFO")
                return SearchOutcome(result.conjugation, result.restart, result.residual_unitary, len(results))
        logger.log(f"Унитарная матрица не найдена за {restarts} перезапусков; лучшая невязка {best:.3e}.", "INFO")
        return SearchOutcome(None, None, best, len(results))


def canonical_phase(A):
    """
    Умножает A на фазу так, чтобы наибольший по модулю элемент стал вещественным положительным.
    """
    flat = A.ravel()
    if not flat.size:
        return A
    largest = flat[int(np.argmax(np.abs(flat)))]
    if largest == 0:
        return A
    return A * (abs(largest) / largest)


def unitary_search(space, T, seed=DEFAULT_SEED, restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL, workers=1, basis=()):
    """
    Ищет сопряжение в пространстве решений уравнения Сильвестра.
    :param space: Базис пространства (d, n, n).
    :param T: Матрица оператора.
    :return: Conjugation или None.
    """
    outcome = UnitarySearch(space, T, tol).search(seed, restarts, workers)
    if outcome.conjugation is None:
        return None
    return Conjugation(outcome.conjugation.A, tuple(basis))
