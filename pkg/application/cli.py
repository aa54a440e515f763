"""
cli.py
Командная строка приложения (click). Команды: check, verify, classify, conjugate, kernels, crossval, broom, generate,
two-level и serve.

Коды выхода check: 0 - оператор комплексно симметричен, 1 - найдено препятствие, 2 - ответ не определён,
3 - ошибка входных данных. Остальные команды возвращают 0 при успехе, 1 при отрицательном результате
конструкции и 3 при ошибке входных данных.
"""

import functools
import sys

import click
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from application.services.broom.broom import (
    BROOM_NOTES, BroomSchedule, build_broom_conjugation, solve_h_sequence, two_level_kernel_structure,
)
from application.services.decider.symmetry_decider import CS, NOT_CS, DecideOptions, decide_cs
from application.services.families.cross_validation import cross_validate
from application.services.families.family_theorems import (
    binary_conjugation_chain, decompose_equal_weight_tree, describe_condition, family_condition, family_tree,
    family_weights, reversal_pairing_cs, two_branch_conjugation,
)
from application.services.operators.conjugation import verify_c_symmetry
from application.services.operators.shift_operator import (
    build_shift, generation_weights, jordan_block_sizes, kernel_table, matrix_dump, uniform_weights,
)
from application.services.trees.tree_core import generate_tree
from documents.doc_functions import emit, load_conjugation, load_weighted_tree, weighted_tree_to_document
from utils.config import BROOM_CHECK_TOL, RunConfig
from utils.errors import (
    BroomConstructionError, ConjugationError, DocumentError, FamilyError, InfeasibleScheduleError, PhaseRecursionError,
    TreeShiftError, WeightError,
)
from utils.logs.logger import logger
from utils.utils import fmt, parse_weight_list

EXIT_CS, EXIT_NOT_CS, EXIT_UNDETERMINED, EXIT_INPUT = 0, 1, 2, 3

console = Console()
error_console = Console(stderr=True)

FAMILIES = ["path", "two-branch", "binary", "broom", "two-level-broom", "uneven-fork"]


def family_tag(name):
    return name.replace("-", "_")


def common_options(function):
    """
    Общие параметры: --tol, --rank-tol, --seed, --restarts, --word-len, --workers, --json, --out.
    """
    options = [
        click.option("--tol", type=float, default=None, help="Допуск проверок (по умолчанию TREESHIFT_TOL)."),
        click.option("--rank-tol", type=float, default=None, help="Относительный порог численного ранга."),
        click.option("--seed", type=int, default=None, help="Зерно генератора случайных чисел."),
        click.option("--restarts", type=int, default=None, help="Число перезапусков поиска унитарной матрицы."),
        click.option("--word-len", type=int, default=None, help="Максимальная длина слов в T и T*."),
        click.option("--workers", type=int, default=None, help="Число потоков."),
        click.option("--json", "json_output", is_flag=True, help="Вывести JSON-документ."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Записать JSON в файл."),
    ]
    for option in reversed(options):
        function = option(function)
    return function


def make_config(command, **values):
    """
    Собирает RunConfig; значения None заменяются значениями по умолчанию.
    :raises click.exceptions.Exit: С кодом 3, если параметры вне допустимых диапазонов.
    """
    try:
        return RunConfig(command=command, **{k: v for k, v in values.items() if v is not None})
    except ValidationError as e:
        first = e.errors()[0]
        error_console.print(f"[red]Некорректный параметр {first['loc'][0]}: {first['msg']}[/red]")
        raise click.exceptions.Exit(EXIT_INPUT)


def handle_input_errors(function):
    """
    Переводит ошибки входных данных в код выхода 3.
    """
    @functools.wraps(function)
    def wrapper(*args, **kwargs):
        try:
            return function(*args, **kwargs)
        except (PhaseRecursionError, InfeasibleScheduleError, BroomConstructionError, ConjugationError):
            raise
        except TreeShiftError as e:
            logger.log(f"Ошибка входных данных: {e}", "WARNING")
            error_console.print(f"[red]Ошибка входных данных:[/red] {e}")
            raise click.exceptions.Exit(EXIT_INPUT)
        except ValueError as e:
            error_console.print(f"[red]Ошибка входных данных:[/red] {e}")
            raise click.exceptions.Exit(EXIT_INPUT)
    return wrapper


def output(config, document, render=None):
    text = emit(document, config.out)
    if config.json_output or render is None:
        click.echo(text)
    else:
        render()


def decide_options(config):
    return DecideOptions(tol=config.tol, rank_tol=config.rank_tol, seed=config.seed, restarts=config.restarts,
                         word_len=config.word_len, workers=config.workers)


def parse_family_weights(family, kappa, theta, weights):
    params = {"kappa": kappa} if family == "binary" else {"kappa": kappa, "theta": theta}
    if family == "two_branch" and theta is None:
        raise FamilyError("Для семейства two-branch нужен параметр --theta.")
    if kappa is None:
        raise FamilyError("Нужен параметр --kappa.")
    values = parse_weight_list(weights)
    return params, family_weights(family, params, values), values


@click.group()
def cli():
    """Взвешенные сдвиги на конечных корневых деревьях и их комплексная симметричность."""


@cli.command("check")
@click.argument("document", type=click.Path(dir_okay=False))
@click.option("--dump-matrix", is_flag=True, help="Добавить матрицу S_λ в документ.")
@common_options
@handle_input_errors
def cmd_check(document, dump_matrix, **options):
    """Решает, комплексно симметричен ли S_λ для дерева с весами из DOCUMENT."""
    config = make_config("check", **options)
    tree, weights = load_weighted_tree(document)
    shift = build_shift(tree, weights)
    verdict = decide_cs(shift, decide_options(config))
    report = verdict.to_document()
    report["config"] = config.embedded()
    if dump_matrix:
        report["matrix"] = matrix_dump(shift)

    def render():
        console.print(f"verdict: [bold]{verdict.verdict}[/bold] (n = {shift.size})")
        if verdict.obstruction is not None:
            console.print(f"obstruction: {verdict.obstruction.kind}")
            for key, value in sorted(verdict.obstruction.witness.items()):
                console.print(f"  {key}: {fmt(value) if not isinstance(value, list) else value}")
        for key, value in sorted(verdict.residuals.items()):
            console.print(f"{key} residual: {fmt(value)}")
        if verdict.verdict not in (CS, NOT_CS):
            console.print(f"best ‖AA*−I‖: {fmt(verdict.diagnostics.get('best_unitary_residual'))}")

    output(config, report, render)
    code = {CS: EXIT_CS, NOT_CS: EXIT_NOT_CS}.get(verdict.verdict, EXIT_UNDETERMINED)
    raise click.exceptions.Exit(code)


@cli.command("verify")
@click.argument("document", type=click.Path(dir_okay=False))
@click.argument("conjugation", type=click.Path(dir_okay=False))
@common_options
@handle_input_errors
def cmd_verify(document, conjugation, **options):
    """Проверяет, что сопряжение из файла CONJUGATION переплетает S_λ из DOCUMENT."""
    config = make_config("verify", **options)
    tree, weights = load_weighted_tree(document)
    shift = build_shift(tree, weights)
    try:
        loaded = load_conjugation(conjugation, config.tol)
    except ConjugationError as e:
        error_console.print(f"[red]Ошибка входных данных:[/red] {e}")
        raise click.exceptions.Exit(EXIT_INPUT)
    if loaded.basis and loaded.basis != shift.basis:
        raise DocumentError("Базис сопряжения не совпадает с базисом дерева.", "basis")
    report = verify_c_symmetry(shift, loaded, config.tol).to_dict()
    report["config"] = config.embedded()

    def render():
        status = "[green]pass[/green]" if report["pass"] else "[red]fail[/red]"
        console.print(f"‖TA−ATᵀ‖ = {fmt(report['residual'])}: {status}")
        if not report["pass"]:
            console.print(f"worst basis vector: {report['worst_basis_vector']}")

    output(config, report, render)
    raise click.exceptions.Exit(EXIT_CS if report["pass"] else EXIT_NOT_CS)


@cli.command("classify")
@click.option("--family", type=click.Choice(["two-branch", "binary"]), required=True)
@click.option("--kappa", type=int, default=None)
@click.option("--theta", type=int, default=None)
@click.option("--weights", required=True, help="Веса поколений через запятую: λ_{−κ+1..θ} или λ_{1..κ}.")
@common_options
@handle_input_errors
def cmd_classify(family, kappa, theta, weights, **options):
    """Вычисляет напечатанное условие комплексной симметричности для семейства."""
    config = make_config("classify", **options)
    family = family_tag(family)
    params, family_values, _ = parse_family_weights(family, kappa, theta, weights)
    result = family_condition(family, params, family_values, config.tol)
    report = {"family": family, "params": params, "weights": list(family_values.values),
              "condition": result, "summary": describe_condition(result), "config": config.embedded()}
    if family == "binary":
        report["alpha_chain"] = binary_conjugation_chain(params["kappa"], family_values)

    def render():
        console.print(describe_condition(result))
        table = Table("clause", "holds", "details")
        for name, clause in result["clauses"].items():
            if isinstance(clause, dict):
                details = "not applicable" if not clause["applies"] else (
                    f"failures at j = {clause['failures']}" if clause["failures"] else "")
                table.add_row(name, str(clause["holds"]), details)
            else:
                table.add_row(f"l={name}", str(clause), "")
        console.print(table)
        if result["skipped"]:
            console.print(f"skipped: {result['skipped']}")

    output(config, report, render)


@cli.command("conjugate")
@click.option("--family", type=click.Choice(["two-branch", "binary"]), required=True)
@click.option("--kappa", type=int, default=None)
@click.option("--theta", type=int, default=None)
@click.option("--weights", required=True)
@common_options
@handle_input_errors
def cmd_conjugate(family, kappa, theta, weights, **options):
    """Строит явное сопряжение: по рекурсии фаз для two-branch, из отражений цепочек для binary."""
    config = make_config("conjugate", **options)
    family = family_tag(family)
    params, family_values, _ = parse_family_weights(family, kappa, theta, weights)
    tree = family_tree(family, params)
    assignment = family_values.to_assignment(tree)
    shift = build_shift(tree, assignment)
    try:
        if family == "two_branch":
            conjugation = two_branch_conjugation(params["kappa"], params["theta"], family_values, config.tol)
        else:
            conjugation = reversal_pairing_cs(decompose_equal_weight_tree(tree, assignment, config.tol), shift,
                                              config.tol)
            if conjugation is None:
                raise ConjugationError("Цепочки разложения нельзя разбить на палиндромы и зеркальные пары.")
    except (PhaseRecursionError, ConjugationError) as e:
        error_console.print(f"[red]Сопряжение не построено:[/red] {e}")
        raise click.exceptions.Exit(EXIT_NOT_CS)
    report = conjugation.to_document()
    report["intertwining"] = verify_c_symmetry(shift, conjugation, config.tol).to_dict()

    def render():
        console.print(f"conjugation built, n = {conjugation.size}")
        console.print(f"‖AA*−I‖ = {fmt(conjugation.residual_unitary)}, ‖A−Aᵀ‖ = {fmt(conjugation.residual_symmetric)}")
        console.print(f"‖TA−ATᵀ‖ = {fmt(report['intertwining']['residual'])}")

    output(config, report, render)


@cli.command("kernels")
@click.argument("document", type=click.Path(dir_okay=False))
@click.option("--max-power", type=int, default=None, help="Наибольшая степень (по умолчанию depth + 1).")
@common_options
@handle_input_errors
def cmd_kernels(document, max_power, **options):
    """Таблица размерностей ker S^m и ker S*^m."""
    config = make_config("kernels", **options)
    tree, weights = load_weighted_tree(document)
    table = kernel_table(build_shift(tree, weights), max_power, config.rank_tol)
    report = table.to_dict()
    report["jordan_block_sizes"] = jordan_block_sizes(table) if max_power is None else None

    def render():
        rich_table = Table("m", "dim ker S^m", "dim ker S*^m")
        for m, forward, backward in table.rows:
            rich_table.add_row(str(m), str(forward), str(backward))
        console.print(rich_table)

    output(config, report, render)


@cli.command("crossval")
@click.option("--family", type=click.Choice(["two-branch", "binary"]), required=True)
@click.option("--kappa-max", type=int, required=True)
@click.option("--theta-max", type=int, default=None)
@click.option("--theta-minus-kappa", type=int, default=None, help="Оставить ячейки с заданной разностью θ − κ.")
@click.option("--samples", type=int, default=20, show_default=True)
@click.option("--certificates", is_flag=True, help="Включить матрицы сертификатов в отчёт.")
@click.option("--progress", is_flag=True, help="Показывать индикатор выполнения.")
@common_options
@handle_input_errors
def cmd_crossval(family, kappa_max, theta_max, theta_minus_kappa, samples, certificates, progress, **options):
    """Сверка напечатанного условия с сертифицированными ответами на сетке параметров."""
    options["tol"] = options.get("tol") or 1e-8
    config = make_config("crossval", **options)
    family = family_tag(family)
    if family == "two_branch" and theta_max is None:
        raise FamilyError("Для семейства two-branch нужен параметр --theta-max.")
    report = cross_validate(family, kappa_max, theta_max, samples, config.seed, decide_options(config),
                            theta_minus_kappa, config.workers, progress, certificates)

    def render():
        summary = report["summary"]
        console.print(f"instances: {summary['total']}, agree: {summary['agree']}, disagree: {summary['disagree']}, "
                      f"undetermined: {summary['undetermined']}")
        table = Table("printed / certified", "count")
        for key, value in summary["agreement_matrix"].items():
            table.add_row(key, str(value))
        console.print(table)

    output(config, report, render)


@cli.command("broom")
@click.option("--weights", required=True, help="Веса λ_1..λ_N из (0, 1) через запятую.")
@click.option("--n", "count", type=int, default=None, help="Использовать первые N весов.")
@click.option("--teeth", type=int, default=None, help="Число зубцов M ≥ 2N+1.")
@common_options
@handle_input_errors
def cmd_broom(weights, count, teeth, **options):
    """Индукция для h_i и частичное сопряжение на венике."""
    options["tol"] = options.get("tol") or BROOM_CHECK_TOL
    config = make_config("broom", **options)
    values = []
    for i, value in enumerate(parse_weight_list(weights), start=1):
        if complex(value).imag != 0.0:
            raise WeightError(f"Вес λ_{i} = {value} не вещественный; веса веника лежат в (0, 1).", str(i))
        values.append(complex(value).real)
    if count is not None:
        values = values[:count]
    schedule = BroomSchedule(tuple(values))
    try:
        h_sequence = solve_h_sequence(schedule)
        data = build_broom_conjugation(schedule, h_sequence, teeth, config.tol)
    except InfeasibleScheduleError as e:
        report = {"feasible": False, "step": e.step, "deficit": e.deficit, "feasibility": schedule.feasibility(),
                  "notes": list(BROOM_NOTES), "config": config.embedded()}
        error_console.print(f"[red]{e}[/red]")
        output(config, report, lambda: None)
        raise click.exceptions.Exit(EXIT_NOT_CS)
    except BroomConstructionError as e:
        report = {"feasible": True, "passed": False, "check": e.check, "residual": e.residual, "report": e.report,
                  "notes": list(BROOM_NOTES), "config": config.embedded()}
        error_console.print(f"[red]{e}[/red]")
        output(config, report, lambda: None)
        raise click.exceptions.Exit(EXIT_NOT_CS)
    report = {"feasible": True, "h_sequence": h_sequence.to_dict(), "conjugation": data.report,
              "config": config.embedded()}

    def render():
        table = Table("step", "s", "t")
        for step, (s, t) in enumerate(zip(h_sequence.s_values, h_sequence.coefficients), start=1):
            table.add_row(str(step), fmt(s), ", ".join(fmt(x) for x in t))
        console.print(table)
        console.print(f"gram residuals: {h_sequence.gram_residuals()}")
        console.print(f"max intertwining residual: {fmt(max(data.report['intertwining']))}")

    output(config, report, render)


@cli.command("two-level")
@click.option("--weights1", required=True, help="Веса λ_{1,j}.")
@click.option("--weights2", required=True, help="Веса λ_{2,j}.")
@common_options
@handle_input_errors
def cmd_two_level(weights1, weights2, **options):
    """Структура ядер S и S* на двухуровневом венике."""
    config = make_config("two-level", **options)
    first = parse_weight_list(weights1)
    second = parse_weight_list(weights2)
    report = two_level_kernel_structure(len(first), first, second, config.rank_tol)

    def render():
        table = Table("subspace", "dimension", "distance")
        for name, distance in report["distances"].items():
            table.add_row(name, str(report["dimensions"][name]), fmt(distance))
        console.print(table)

    output(config, report, render)


@cli.command("generate")
@click.option("--family", type=click.Choice(FAMILIES), required=True)
@click.option("--n", type=int, default=None)
@click.option("--kappa", type=int, default=None)
@click.option("--theta", type=int, default=None)
@click.option("--stem", type=int, default=None)
@click.option("--weight", default="1", show_default=True, help="Общий вес всех некорневых вершин.")
@click.option("--generation-weights", "per_depth", default=None, help="Веса поколений через запятую (λ по глубине).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@handle_input_errors
def cmd_generate(family, n, kappa, theta, stem, weight, per_depth, out):
    """Документ дерева семейства с весами, пригодный для check и kernels."""
    tree = generate_tree({"family": family_tag(family), "n": n, "kappa": kappa, "theta": theta, "stem": stem})
    if per_depth:
        weights = generation_weights(tree, parse_weight_list(per_depth))
    else:
        weights = uniform_weights(tree, parse_weight_list(weight)[0])
    click.echo(emit(weighted_tree_to_document(tree, weights), out))


@cli.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=5000, show_default=True)
def cmd_serve(host, port):
    """Запускает HTTP-сервис."""
    from application.app import create_app

    create_app().run(host=host, port=port, debug=False, use_reloader=False)


def main():
    try:
        cli(standalone_mode=True)
    except Exception as e:
        logger.log(f"Необработанная ошибка: {e}", "ERROR", exc_info=e)
        sys.exit(EXIT_INPUT)
