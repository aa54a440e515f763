"""
utils.py
Модуль вспомогательных функций в приложении: преобразование комплексных чисел и матриц в JSON-совместимый вид,
форматирование чисел для текстового вывода и разбор списков весов из командной строки.
"""

import json
import math

import numpy as np


def complex_to_pair(value):
    """
    Преобразует комплексное число в пару [re, im].
    :param value: Число (int, float, complex, numpy-скаляр).
    :return: Список из двух float.
    """
    value = complex(value)
    return [float(value.real), float(value.imag)]


def pair_to_complex(pair):
    """
    Преобразует пару [re, im] или вещественное число в complex.
    :param pair: Список/кортеж из двух чисел либо одно число.
    :return: complex
    :raises ValueError: Если пара имеет неверную длину.
    """
    if isinstance(pair, (int, float)):
        return complex(pair)
    if len(pair) != 2:
        raise ValueError("Комплексное число должно задаваться парой [re, im].")
    return complex(float(pair[0]), float(pair[1]))


def matrix_to_pairs(matrix):
    """
    Матрица в построчный список строк из пар [re, im].
    """
    matrix = np.asarray(matrix, dtype=complex)
    return [[complex_to_pair(entry) for entry in row] for row in matrix]


def pairs_to_matrix(rows):
    return np.array([[pair_to_complex(entry) for entry in row] for row in rows], dtype=complex)


def convert_numbers(obj):
    """
    Рекурсивно преобразует numpy-типы и комплексные числа в структуре данных (список, словарь, или одиночный
    объект) в JSON-совместимые значения.

    :param obj: Структура данных.
    :return: Та же структура данных с преобразованными числами.
    """
    if isinstance(obj, (list, tuple)):
        return [convert_numbers(i) for i in obj]
    elif isinstance(obj, dict):
        return {str(k): convert_numbers(v) for k, v in obj.items()}
    elif isinstance(obj, np.ndarray):
        return convert_numbers(obj.tolist())
    elif isinstance(obj, (complex, np.complexfloating)):
        return complex_to_pair(obj)
    elif isinstance(obj, np.bool_):
        return bool(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, np.floating):
        return float(obj)
    return obj


def dump_json(document):
    """
    Стабильная сериализация отчёта: ключи отсортированы, отступ 2.
    """
    return json.dumps(convert_numbers(document), sort_keys=True, indent=2, ensure_ascii=False)


def fmt(value):
    """
    Форматирует число с 17 значащими цифрами.
    """
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if value.imag == 0.0:
            return format(value.real, ".17g")
        sign = "+" if value.imag >= 0 else "-"
        return f"{value.real:.17g}{sign}{abs(value.imag):.17g}j"
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def parse_number(text):
    """
    Разбирает число из командной строки: "1", "-0.5", "1+2j", "i", "sqrt2", "2sqrt2", "1/3".
    :param text: Строка.
    :return: complex
    :raises ValueError: Если строку не удалось разобрать.
    """
    body = (text or "").strip().replace(" ", "")
    if not body:
        raise ValueError("Пустое значение веса.")
    if body in ("i", "+i"):
        return 1j
    if body == "-i":
        return -1j
    lowered = body.lower()
    if "sqrt" in lowered:
        coefficient, _, radicand = lowered.partition("sqrt")
        coefficient = coefficient or "1"
        if coefficient == "-":
            coefficient = "-1"
        return complex(float(coefficient) * math.sqrt(float(radicand)))
    if "/" in body:
        numerator, _, denominator = body.partition("/")
        return complex(float(numerator) / float(denominator))
    try:
        return complex(body.replace("i", "j"))
    except ValueError:
        raise ValueError(f"Не удалось разобрать число '{text}'.")


def parse_weight_list(text):
    """
    Разбирает список весов через запятую.
    :param text: Строка вида "1,2,sqrt2".
    :return: Список complex.
    """
    if text is None or not text.strip():
        return []
    return [parse_number(part) for part in text.split(",")]
