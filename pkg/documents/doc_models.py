"""
doc_models.py
Pydantic-модели входных JSON-документов: дерево, веса, матрица сопряжения, расписание веника.
Модели проверяют только форму документа; согласованность с деревом проверяют сервисы.
"""

from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

Number = Union[float, Tuple[float, float], List[float]]


class TreeDocument(BaseModel):
    model_config = ConfigDict(extra="ignore")

    vertices: List[str] = Field(min_length=1)
    root: str
    edges: List[Tuple[str, str]] = Field(default_factory=list)


class WeightedTreeDocument(TreeDocument):
    """
    Дерево вместе с весами: "weights" сопоставляет метке вершины пару [re, im] или вещественное число.
    """
    weights: Dict[str, Number] = Field(default_factory=dict)

    @field_validator("weights")
    @classmethod
    def check_pairs(cls, value):
        for label, number in value.items():
            if isinstance(number, (list, tuple)) and len(number) != 2:
                raise ValueError(f"вес вершины {label} должен быть парой [re, im]")
        return value


class ConjugationDocument(BaseModel):
    model_config = ConfigDict(extra="ignore")

    A: List[List[Tuple[float, float]]]
    basis: List[str]
    residual_unitary: Optional[float] = None
    residual_symmetric: Optional[float] = None


class BroomScheduleDocument(BaseModel):
    weights: List[float] = Field(min_length=1)
    teeth: Optional[int] = Field(default=None, ge=3)
