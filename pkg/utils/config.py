"""
config.py
Настройки приложения. Значения по умолчанию читаются из переменных окружения (файл .env подхватывается через
python-dotenv), параметры конкретного запуска проверяются моделью RunConfig.
"""

import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

load_dotenv()


def _env_float(name, default):
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


def _env_int(name, default):
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


DEFAULT_TOL = _env_float("TREESHIFT_TOL", 1e-10)
DEFAULT_RANK_TOL = _env_float("TREESHIFT_RANK_TOL", 1e-10)
DEFAULT_SEED = _env_int("TREESHIFT_SEED", 0)
DEFAULT_RESTARTS = _env_int("TREESHIFT_RESTARTS", 64)
DEFAULT_WORD_LEN = _env_int("TREESHIFT_WORD_LEN", 8)
DEFAULT_WORKERS = _env_int("TREESHIFT_WORKERS", 1)

# Константы поиска унитарной матрицы в пространстве решений уравнения Сильвестра
GRADIENT_STEPS = 150
ARMIJO_INITIAL_STEP = 1.0
ARMIJO_SHRINK = 0.5
ARMIJO_SUFFICIENT_DECREASE = 1e-4
ARMIJO_MAX_HALVINGS = 30
POLISH_MAX_NFEV = 400
POLISH_TOL = 1e-15

# Допуски для конструкций на венике
BROOM_GRAM_TOL = 1e-9
BROOM_CHECK_TOL = 1e-8

# Верхняя граница размера матрицы для перекрёстной проверки
CROSSVAL_MAX_DIMENSION = 127


class RunConfig(BaseModel):
    """
    Параметры одного запуска команды CLI или HTTP-запроса.
    """
    command: str
    tol: float = Field(default=DEFAULT_TOL, gt=0)
    rank_tol: float = Field(default=DEFAULT_RANK_TOL, gt=0)
    seed: int = DEFAULT_SEED
    restarts: int = Field(default=DEFAULT_RESTARTS, ge=1)
    word_len: int = Field(default=DEFAULT_WORD_LEN, ge=2)
    workers: int = Field(default=DEFAULT_WORKERS, ge=1)
    out: Optional[str] = None
    json_output: bool = False

    def embedded(self):
        """
        Параметры, которые записываются в отчёты для воспроизводимости.
        """
        return {
            "command": self.command,
            "tol": self.tol,
            "rank_tol": self.rank_tol,
            "seed": self.seed,
            "restarts": self.restarts,
            "word_len": self.word_len,
        }
