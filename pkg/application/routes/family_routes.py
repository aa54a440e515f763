"""
family_routes.py
Маршруты для генерации деревьев, напечатанных условий семейств и конструкций на венике.
"""

from flask import Blueprint, jsonify

from application.routes.check_routes import request_document
from application.services.broom.broom import BROOM_NOTES, BroomSchedule, build_broom_conjugation, solve_h_sequence
from application.services.families.family_theorems import describe_condition, family_condition, family_weights
from application.services.operators.shift_operator import generation_weights, uniform_weights
from application.services.trees.tree_core import generate_tree
from documents.doc_functions import broom_schedule_from_document, weighted_tree_to_document
from utils.config import BROOM_CHECK_TOL
from utils.errors import BroomConstructionError, FamilyError, InfeasibleScheduleError
from utils.utils import convert_numbers, pair_to_complex

# Создаем blueprint для маршрутов семейств
family_bp = Blueprint("family_bp", __name__)


@family_bp.route("/generate", methods=["POST"])
def generate():
    """
    Генерирует дерево семейства: {"family", "n"|"kappa"|"theta"|"stem", "weight"?, "generation_weights"?}.
    """
    document = request_document()
    tree = generate_tree({key: document.get(key) for key in ("family", "n", "kappa", "theta", "stem")})
    if document.get("generation_weights"):
        weights = generation_weights(tree, [pair_to_complex(w) for w in document["generation_weights"]])
    else:
        weights = uniform_weights(tree, pair_to_complex(document.get("weight", 1.0)))
    return jsonify(weighted_tree_to_document(tree, weights)), 200


@family_bp.route("/classify", methods=["POST"])
def classify():
    """
    Напечатанное условие: {"family": "two_branch"|"binary", "kappa", "theta"?, "weights": [...]}.
    """
    document = request_document()
    family = document.get("family")
    if family not in ("two_branch", "binary"):
        raise FamilyError("Поле 'family' должно быть two_branch или binary.")
    params = {"kappa": document.get("kappa")}
    if family == "two_branch":
        params["theta"] = document.get("theta")
    if any(value is None for value in params.values()):
        raise FamilyError("Не заданы параметры семейства.")
    values = [pair_to_complex(w) for w in document.get("weights", [])]
    result = family_condition(family, params, family_weights(family, params, values), document.get("tol", 1e-10))
    return jsonify(convert_numbers({"condition": result, "summary": describe_condition(result)})), 200


@family_bp.route("/broom", methods=["POST"])
def broom():
    """
    Индукция для h_i и частичное сопряжение на венике: {"weights": [...], "teeth"?, "tol"?}.
    """
    document = request_document()
    weights, teeth = broom_schedule_from_document(document)
    schedule = BroomSchedule(weights)
    try:
        h_sequence = solve_h_sequence(schedule)
        data = build_broom_conjugation(schedule, h_sequence, teeth,
                                       document.get("tol", BROOM_CHECK_TOL))
    except InfeasibleScheduleError as e:
        return jsonify(feasible=False, step=e.step, deficit=e.deficit, description=str(e),
                       notes=list(BROOM_NOTES)), 200
    except BroomConstructionError as e:
        return jsonify(convert_numbers({"feasible": True, "passed": False, "check": e.check,
                                        "residual": e.residual, "description": str(e),
                                        "notes": list(BROOM_NOTES)})), 200
    return jsonify(convert_numbers({"feasible": True, "h_sequence": h_sequence.to_dict(),
                                    "conjugation": data.report})), 200
