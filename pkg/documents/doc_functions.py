"""
doc_functions.py
Чтение и запись JSON-документов приложения: дерево с весами, сопряжение, отчёты.
Все функции загрузки поднимают DocumentError с именем поля, в котором найдена ошибка.
"""

import json

from pydantic import ValidationError

from application.services.operators.conjugation import conjugation_from_document
from application.services.operators.shift_operator import normalize_weights, weights_to_document
from application.services.trees.tree_core import build_tree, tree_to_document
from documents.doc_models import BroomScheduleDocument, ConjugationDocument, WeightedTreeDocument
from utils.errors import DocumentError, TreeError, WeightError
from utils.logs.logger import logger
from utils.utils import dump_json, pair_to_complex


def _field_error(error):
    first = error.errors()[0]
    field_name = ".".join(str(part) for part in first["loc"])
    return DocumentError(f"Поле '{field_name}': {first['msg']}", field_name)


def read_json(path):
    """
    Загружает JSON из файла ("-" - стандартный ввод не поддерживается, нужен путь).
    :raises DocumentError: Файл не найден или не является JSON.
    """
    try:
        with open(path, "r", encoding="utf-8") as file:
            return json.load(file)
    except FileNotFoundError:
        raise DocumentError(f"Файл {path} не найден.")
    except json.JSONDecodeError as e:
        raise DocumentError(f"Файл {path} не является корректным JSON: {e}")


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as file:
        file.write(text)
        if not text.endswith("\n"):
            file.write("\n")


def weighted_tree_from_document(document):
    """
    Разбирает документ {"vertices", "root", "edges", "weights"}.
    :return: Кортеж (DirectedTree, словарь весов complex).
    :raises DocumentError: Документ не соответствует схеме, дерево некорректно или веса не согласованы.
    """
    try:
        parsed = WeightedTreeDocument.model_validate(document)
    except ValidationError as e:
        raise _field_error(e)
    try:
        tree = build_tree(parsed.vertices, parsed.edges, parsed.root)
    except TreeError as e:
        raise DocumentError(f"Поле 'edges': {e}", "edges")
    weights = {label: pair_to_complex(value) for label, value in parsed.weights.items()}
    try:
        weights = normalize_weights(tree, weights)
    except WeightError as e:
        logger.log(f"Веса документа не согласованы с деревом: {e}", "WARNING")
        raise DocumentError(f"Поле 'weights': {e}", f"weights.{e.vertex}" if e.vertex else "weights")
    return tree, weights


def weighted_tree_to_document(tree, weights):
    document = tree_to_document(tree)
    document["weights"] = weights_to_document(weights)
    return document


def load_weighted_tree(path):
    return weighted_tree_from_document(read_json(path))


def load_conjugation(path, tol):
    try:
        parsed = ConjugationDocument.model_validate(read_json(path))
    except ValidationError as e:
        raise _field_error(e)
    return conjugation_from_document(parsed.model_dump(), tol)


def broom_schedule_from_document(document):
    """
    Проверяет тело запроса для конструкции на венике.
    :return: (веса зубцов, число зубцов усечённого веника или None).
    :raises DocumentError: Веса отсутствуют или число зубцов меньше 3.
    """
    try:
        parsed = BroomScheduleDocument.model_validate(document)
    except ValidationError as e:
        raise _field_error(e)
    return tuple(parsed.weights), parsed.teeth


def emit(document, out=None):
    """
    Сериализует отчёт; при заданном out пишет в файл.
    :return: Строка JSON.
    """
    text = dump_json(document)
    if out:
        write_text(out, text)
    return text
