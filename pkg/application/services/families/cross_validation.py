"""
cross_validation.py
Сверка напечатанных условий для T_{κ,θ} и T²_κ с сертифицированными ответами: решающей процедурой decide_cs
и сопряжением из отражений цепочек.

Для каждой ячейки сетки параметров генерируются случайные веса: чётные выборки удовлетворяют соотношениям
палиндромности цепочек, нечётные получаются из них изменением одного связанного веса. Каждая выборка
воспроизводима по (seed, номер ячейки, номер выборки).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from application.services.decider.symmetry_decider import (
    CS, NOT_CS, UNDETERMINED, DecideOptions, decide_cs, recheck_obstruction,
)
from application.services.families.family_theorems import (
    binary_conjugation_chain, chain_palindrome_relations, decompose_equal_weight_tree, family_condition, family_tree,
    family_weights, reversal_pairing_cs, two_branch_conjugation,
)
from application.services.operators.conjugation import verify_c_symmetry
from application.services.operators.shift_operator import build_shift, weights_to_document
from utils.config import CROSSVAL_MAX_DIMENSION, DEFAULT_SEED
from utils.errors import FamilyError, TreeShiftError
from utils.logs.logger import logger


class RelationSampler:
    """
    Взвешенная система непересекающихся множеств над индексами весов: в каждом классе модули весов связаны
    множителями, |λ_a| = potential(a)·|λ_корня|.
    """

    def __init__(self, indices, relations, tol=1e-12):
        self.indices = list(indices)
        self.parent = {i: i for i in self.indices}
        self.potential = {i: 1.0 for i in self.indices}
        self.consistent = True
        for a, b, ratio in relations:
            self.union(a, b, ratio, tol)

    def find(self, i):
        if self.parent[i] == i:
            return i
        root = self.find(self.parent[i])
        if self.parent[i] != root:
            self.potential[i] *= self.potential[self.parent[i]]
            self.parent[i] = root
        return root

    def union(self, a, b, ratio, tol):
        # |λ_a| = ratio·|λ_b|
        root_a, root_b = self.find(a), self.find(b)
        if root_a == root_b:
            if not math.isclose(self.potential[a], ratio * self.potential[b], rel_tol=tol):
                self.consistent = False
            return
        self.parent[root_a] = root_b
        self.potential[root_a] = ratio * self.potential[b] / self.potential[a]

    @property
    def constrained(self):
        roots = [self.find(i) for i in self.indices]
        return [i for i in self.indices if roots.count(self.find(i)) > 1]

    def sample(self, rng, low=0.5, high=2.0):
        roots = {}
        moduli = {}
        for i in self.indices:
            root = self.find(i)
            if root not in roots:
                roots[root] = rng.uniform(low, high)
            moduli[i] = roots[root] * self.potential[i]
        return moduli


@dataclass(frozen=True)
class Instance:
    index: int
    family: str
    params: dict
    cell: int
    sample: int
    values: tuple
    construction: str


def weight_indices(family, params):
    if family == "two_branch":
        return list(range(-params["kappa"] + 1, params["theta"] + 1))
    return list(range(1, params["kappa"] + 1))


def family_dimension(family, params):
    if family == "two_branch":
        return params["kappa"] + 1 + 2 * params["theta"]
    return 2 ** (params["kappa"] + 1) - 1


def parameter_grid(family, kappa_max, theta_max=None, theta_minus_kappa=None):
    """
    Ячейки сетки в детерминированном порядке.
    :param theta_minus_kappa: Оставить только ячейки с заданной разностью θ − κ.
    """
    cells = []
    if family == "two_branch":
        for kappa in range(0, kappa_max + 1):
            for theta in range(1, (theta_max or 0) + 1):
                if theta_minus_kappa is not None and theta - kappa != theta_minus_kappa:
                    continue
                cells.append({"kappa": kappa, "theta": theta})
    elif family == "binary":
        cells = [{"kappa": kappa} for kappa in range(2, kappa_max + 1)]
    else:
        raise FamilyError(f"Неизвестное семейство {family}.")
    for params in cells:
        if family_dimension(family, params) > CROSSVAL_MAX_DIMENSION:
            raise FamilyError(f"Ячейка {params} даёт матрицу больше {CROSSVAL_MAX_DIMENSION}×{CROSSVAL_MAX_DIMENSION}.")
    return cells


def sample_instance(family, params, cell, sample, seed):
    """
    Случайные веса ячейки: модули из [0.5, 2], случайные фазы. Нечётная выборка портит одно соотношение,
    умножая связанный вес на число из [1.5, 2.5].
    """
    rng = np.random.default_rng([seed, cell, sample])
    indices = weight_indices(family, params)
    sampler = RelationSampler(indices, chain_palindrome_relations(family, params))
    if sampler.consistent:
        moduli = sampler.sample(rng)
        construction = "satisfying"
    else:
        moduli = {i: rng.uniform(0.5, 2.0) for i in indices}
        construction = "unconstrained"
    constrained = sampler.constrained
    if sample % 2 == 1 and sampler.consistent:
        if constrained:
            target = constrained[int(rng.integers(0, len(constrained)))]
            moduli[target] *= rng.uniform(1.5, 2.5)
            construction = "perturbed"
        else:
            construction = "unconstrained"
    phases = rng.uniform(0.0, 2.0 * math.pi, size=len(indices))
    values = tuple(complex(moduli[i] * np.exp(1j * phi)) for i, phi in zip(indices, phases))
    return values, construction


def construction_audit(family, params, values, tol):
    """
    Проверка явной конструкции: сопряжение по рекурсии фаз для T_{κ,θ}, нормировки α_l для T²_κ.
    """
    if family == "binary":
        return {"kind": "alpha_chain", "chain": binary_conjugation_chain(params["kappa"], values)}
    try:
        conjugation = two_branch_conjugation(params["kappa"], params["theta"], values, tol)
    except TreeShiftError as e:
        return {"kind": "phase_recursion", "built": False, "error": str(e),
                "sequence": getattr(e, "sequence", None), "step": getattr(e, "step", None)}
    tree = family_tree(family, params)
    weights = family_weights(family, params, values).to_assignment(tree)
    report = verify_c_symmetry(build_shift(tree, weights), conjugation, tol)
    return {"kind": "phase_recursion", "built": True, "residual": report.residual}


def evaluate_instance(instance, options, include_certificates=False):
    tol = options.tol
    family, params = instance.family, instance.params
    tree = family_tree(family, params)
    weights = family_weights(family, params, instance.values)
    assignment = weights.to_assignment(tree)
    shift = build_shift(tree, assignment)

    printed = family_condition(family, params, weights, tol)
    verdict = decide_cs(shift, DecideOptions(tol=tol, rank_tol=options.rank_tol, seed=options.seed,
                                             restarts=options.restarts, word_len=options.word_len, workers=1))
    pairing = reversal_pairing_cs(decompose_equal_weight_tree(tree, assignment, tol), shift, tol)
    pairing_document = {"verdict": CS if pairing is not None else "none"}
    if pairing is not None:
        pairing_document["residual"] = verify_c_symmetry(shift, pairing, tol).residual

    truth = None
    certified = False
    if verdict.verdict == CS:
        truth = True
        certified = verify_c_symmetry(shift, verdict.certificate, tol).passed
    elif verdict.verdict == NOT_CS:
        truth = False
        certified = recheck_obstruction(shift, verdict.obstruction, tol, options.rank_tol)
    elif pairing is not None:
        truth = True
        certified = True

    contradiction = verdict.verdict == NOT_CS and pairing is not None
    if contradiction:
        logger.log(f"Противоречие между decide_cs и сопряжением из отражений: {family} {params}.", "ERROR")

    agree = truth is not None and truth == printed["satisfied"]
    if truth is not None and not agree:
        logger.log(f"Напечатанное условие расходится с сертифицированным ответом: {family} {params}, "
                   f"выборка {instance.sample}.", "WARNING")

    return {
        "index": instance.index,
        "family": family,
        "params": params,
        "sample": instance.sample,
        "construction": instance.construction,
        "weights": weights_to_document(assignment),
        "generation_weights": list(instance.values),
        "printed_condition": printed,
        "decider": verdict.to_document(include_certificate=include_certificates),
        "pairing": pairing_document,
        "construction_audit": construction_audit(family, params, instance.values, tol),
        "truth": None if truth is None else (CS if truth else NOT_CS),
        "certified": certified,
        "agree": agree,
        "contradiction": contradiction,
    }


def summarize(records):
    matrix = {}
    for printed in ("satisfied", "not_satisfied"):
        for truth in (CS, NOT_CS, UNDETERMINED):
            matrix[f"{printed}/{truth}"] = 0
    disagreements = []
    for record in records:
        printed = "satisfied" if record["printed_condition"]["satisfied"] else "not_satisfied"
        truth = record["truth"] or UNDETERMINED
        matrix[f"{printed}/{truth}"] += 1
        if record["truth"] is not None and not record["agree"]:
            disagreements.append({
                "index": record["index"],
                "params": record["params"],
                "printed": printed,
                "truth": record["truth"],
                "certified": record["certified"],
            })
    total = len(records)
    agreed = sum(1 for record in records if record["agree"])
    return {
        "total": total,
        "agree": agreed,
        "disagree": len(disagreements),
        "undetermined": sum(1 for record in records if record["truth"] is None),
        "contradictions": sum(1 for record in records if record["contradiction"]),
        "agreement_rate": (agreed / total) if total else None,
        "agreement_matrix": matrix,
        "certified_disagreements": disagreements,
    }


def cross_validate(family, kappa_max, theta_max=None, samples=20, seed=DEFAULT_SEED, options=None,
                   theta_minus_kappa=None, workers=1, progress=False, include_certificates=False):
    """
    Перекрёстная проверка напечатанного условия на сетке параметров.
    :param family: "two_branch" или "binary".
    :param kappa_max: Наибольшее κ в сетке.
    :param theta_max: Наибольшее θ (только для two_branch).
    :param samples: Число выборок весов в ячейке.
    :param seed: Зерно генератора; отчёт полностью определяется входными параметрами.
    :param options: DecideOptions для decide_cs (по умолчанию tol = 1e-8).
    :return: Словарь {"config", "instances", "summary"}.
    """
    options = options or DecideOptions(tol=1e-8, seed=seed)
    cells = parameter_grid(family, kappa_max, theta_max, theta_minus_kappa)
    instances = []
    for cell, params in enumerate(cells):
        for sample in range(samples):
            values, construction = sample_instance(family, params, cell, sample, seed)
            instances.append(Instance(len(instances), family, params, cell, sample, values, construction))

    def run(instance):
        return evaluate_instance(instance, options, include_certificates)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            mapped = executor.map(run, instances)
            records = list(tqdm(mapped, total=len(instances), disable=not progress, desc="crossval"))
    else:
        records = [run(instance) for instance in tqdm(instances, disable=not progress, desc="crossval")]

    summary = summarize(records)
    logger.log(f"Перекрёстная проверка {family}: {summary['agree']} из {summary['total']} совпадений, "
               f"{summary['disagree']} расхождений.", "INFO")
    return {
        "config": {
            "family": family,
            "kappa_max": kappa_max,
            "theta_max": theta_max,
            "theta_minus_kappa": theta_minus_kappa,
            "samples": samples,
            "seed": seed,
            "options": options.to_dict(),
        },
        "instances": records,
        "summary": summary,
    }
