"""
check_routes.py
Маршруты для проверки комплексной симметричности и таблиц ядер. Тело запроса - документ дерева с весами,
параметры решающей процедуры передаются в поле "options".
"""

from flask import Blueprint, jsonify, request

from application.services.decider.symmetry_decider import DecideOptions, decide_cs
from application.services.operators.shift_operator import build_shift, jordan_block_sizes, kernel_table
from documents.doc_functions import weighted_tree_from_document
from utils.config import RunConfig
from utils.errors import DocumentError
from utils.utils import convert_numbers

# Создаем blueprint для маршрутов проверки
check_bp = Blueprint("check_bp", __name__)


def request_document():
    document = request.get_json(silent=True)
    if not isinstance(document, dict):
        raise DocumentError("Тело запроса должно быть JSON-объектом.")
    return document


def request_config(document, command):
    options = document.get("options", {})
    if not isinstance(options, dict):
        raise DocumentError("Поле 'options' должно быть JSON-объектом.", "options")
    try:
        return RunConfig(command=command, **options)
    except ValueError as e:
        raise DocumentError(f"Поле 'options': {e}", "options")


@check_bp.route("/check", methods=["POST"])
def check():
    """
    Решает, комплексно симметричен ли S_λ.

    :return: Документ вердикта; HTTP-код 200 для любого вердикта.
    """
    document = request_document()
    config = request_config(document, "check")
    tree, weights = weighted_tree_from_document(document)
    verdict = decide_cs(build_shift(tree, weights), DecideOptions(
        tol=config.tol, rank_tol=config.rank_tol, seed=config.seed, restarts=config.restarts,
        word_len=config.word_len, workers=config.workers))
    report = verdict.to_document()
    report["config"] = config.embedded()
    return jsonify(convert_numbers(report)), 200


@check_bp.route("/kernels", methods=["POST"])
def kernels():
    """
    Таблица размерностей ker S^m и ker S*^m; необязательное поле "max_power".
    """
    document = request_document()
    config = request_config(document, "kernels")
    tree, weights = weighted_tree_from_document(document)
    table = kernel_table(build_shift(tree, weights), document.get("max_power"), config.rank_tol)
    report = table.to_dict()
    report["jordan_block_sizes"] = jordan_block_sizes(table)
    return jsonify(report), 200
