"""
tree_core.py
Конечные корневые направленные деревья и генераторы семейств деревьев: путь, дерево с двумя ветвями, полное
двоичное дерево, веник, двухуровневый веник, несимметричная развилка и случайное дерево.

Метки вершин - строки: "0", "-3", "1,2". Порядок вершин детерминирован: обход в ширину от корня, дети
упорядочены по числовому ключу метки. Этот порядок задаёт базис e_v во всех матричных представлениях.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ValidationError, model_validator

from documents.doc_models import TreeDocument
from utils.errors import DocumentError, TreeError
from utils.logs.logger import logger


def label_key(label):
    """
    Числовой ключ сортировки метки: "1,2" -> (0, (1, 2)); нечисловые метки идут после числовых.
    """
    try:
        return (0, tuple(int(part) for part in label.split(",")), "")
    except ValueError:
        return (1, (), label)


def make_label(*coordinates):
    return ",".join(str(c) for c in coordinates)


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    message: str

    def to_dict(self):
        return {"kind": self.kind, "subject": self.subject, "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


@dataclass(frozen=True)
class DirectedTree:
    """
    Конечное корневое направленное дерево. Экземпляр неизменяем; производные отображения вычисляются лениво.
    Конструктор не проверяет инварианты, для этого есть validate_tree и build_tree.
    """
    vertices: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    root: str
    family: Optional[str] = field(default=None, compare=False)

    @cached_property
    def parent_map(self) -> Dict[str, str]:
        parents = {}
        for parent, child in self.edges:
            parents.setdefault(child, parent)
        return parents

    @cached_property
    def children_map(self) -> Dict[str, List[str]]:
        children = {v: [] for v in self.vertices}
        for parent, child in self.edges:
            children.setdefault(parent, []).append(child)
        for v in children:
            children[v] = sorted(set(children[v]), key=label_key)
        return children

    @cached_property
    def index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def depths(self) -> Dict[str, int]:
        depths = {self.root: 0}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            for child in self.children_map.get(v, []):
                if child not in depths:
                    depths[child] = depths[v] + 1
                    queue.append(child)
        return depths

    @property
    def size(self):
        return len(self.vertices)

    @property
    def depth(self):
        return max(self.depths.values())

    def depth_of(self, vertex):
        return self.depths[vertex]

    def parent(self, vertex):
        return self.parent_map.get(vertex)

    def children(self, vertex):
        return list(self.children_map.get(vertex, []))

    @property
    def non_root(self):
        return [v for v in self.vertices if v != self.root]

    @property
    def branching_vertices(self):
        return [v for v in self.vertices if len(self.children_map.get(v, [])) >= 2]

    @property
    def leaves(self):
        return [v for v in self.vertices if not self.children_map.get(v)]

    def generation(self, depth):
        return [v for v in self.vertices if self.depths.get(v) == depth]


def validate_tree(tree):
    """
    Проверяет инварианты дерева.
    :param tree: DirectedTree
    :return: ValidationReport со списком нарушений (пустой, если дерево корректно).
    """
    violations = []
    known = set()
    for v in tree.vertices:
        if v in known:
            violations.append(Violation("duplicate_vertex", v, f"вершина {v} указана дважды"))
        known.add(v)

    if tree.root not in known:
        violations.append(Violation("missing_root", tree.root, f"корень {tree.root} не входит в список вершин"))

    parents = {}
    seen_edges = set()
    for parent, child in tree.edges:
        edge = f"{parent}->{child}"
        if (parent, child) in seen_edges:
            violations.append(Violation("duplicate_edge", edge, f"ребро {edge} указано дважды"))
            continue
        seen_edges.add((parent, child))
        for end in (parent, child):
            if end not in known:
                violations.append(Violation("unknown_vertex", end, f"ребро {edge} ссылается на неизвестную вершину {end}"))
        if parent == child:
            violations.append(Violation("self_loop", edge, f"петля в вершине {parent}"))
        parents.setdefault(child, []).append(parent)

    for child, its_parents in parents.items():
        if len(its_parents) > 1:
            violations.append(Violation("two_parents", child, f"vertex {child} has two parents ({', '.join(its_parents)})"))
    if tree.root in parents:
        violations.append(Violation("root_has_parent", tree.root, f"у корня {tree.root} есть родитель"))

    reachable = set(tree.depths) if tree.root in known else set()
    for v in tree.vertices:
        if v != tree.root and v not in parents:
            violations.append(Violation("orphan", v, f"у вершины {v} нет родителя"))
        elif v not in reachable:
            violations.append(Violation("unreachable", v, f"вершина {v} недостижима из корня (цикл)"))

    return ValidationReport(tuple(violations))


def canonical_order(vertices, edges, root):
    """
    Обход в ширину от корня с детьми, упорядоченными по label_key.
    """
    children = {}
    for parent, child in edges:
        children.setdefault(parent, []).append(child)
    order = [root]
    queue = deque([root])
    visited = {root}
    while queue:
        v = queue.popleft()
        for child in sorted(children.get(v, []), key=label_key):
            if child not in visited:
                visited.add(child)
                order.append(child)
                queue.append(child)
    return order


def build_tree(vertices, edges, root, family=None):
    """
    Создаёт дерево в каноническом порядке вершин и проверяет его.
    :raises TreeError: Если дерево некорректно; ошибка содержит список нарушений.
    """
    raw = DirectedTree(tuple(vertices), tuple(tuple(e) for e in edges), root, family)
    report = validate_tree(raw)
    if not report.ok:
        raise TreeError("; ".join(v.message for v in report.violations), report.violations)
    order = canonical_order(raw.vertices, raw.edges, root)
    index = {v: i for i, v in enumerate(order)}
    ordered_edges = sorted(raw.edges, key=lambda e: index[e[1]])
    return DirectedTree(tuple(order), tuple(ordered_edges), root, family)


def _check(error):
    if error:
        raise TreeError(error)


def generate_path(n):
    """
    Путь из n вершин "0" -> "1" -> ... -> "n-1".
    """
    _check(None if n >= 1 else "Длина пути n должна быть не меньше 1.")
    vertices = [str(i) for i in range(n)]
    edges = [(str(i), str(i + 1)) for i in range(n - 1)]
    return build_tree(vertices, edges, "0", "path")


def generate_two_branch(kappa, theta):
    """
    Дерево T_{κ,θ}: ствол -κ -> ... -> 0 и две ветви (i,1) -> ... -> (i,θ), i = 1, 2, выходящие из вершины 0.
    :param kappa: Длина ствола κ ≥ 0.
    :param theta: Длина ветвей θ ≥ 1.
    :return: DirectedTree с κ + 1 + 2θ вершинами.
    """
    _check(None if kappa >= 0 else "Параметр κ должен быть неотрицательным.")
    _check(None if theta >= 1 else "Параметр θ должен быть не меньше 1.")
    trunk = [str(-k) for k in range(kappa, -1, -1)]
    vertices = list(trunk)
    edges = list(zip(trunk, trunk[1:]))
    for branch in (1, 2):
        previous = "0"
        for j in range(1, theta + 1):
            label = make_label(branch, j)
            vertices.append(label)
            edges.append((previous, label))
            previous = label
    return build_tree(vertices, edges, trunk[0], "two_branch")


def generate_binary(kappa):
    """
    Полное двоичное дерево глубины κ: вершины (k, l), l = 1..2^k, дети (k, l) -> (k+1, 2l-1), (k+1, 2l).
    """
    _check(None if kappa >= 2 else "Глубина двоичного дерева κ должна быть не меньше 2.")
    vertices = ["0,1"]
    edges = []
    for k in range(kappa):
        for l in range(1, 2 ** k + 1):
            for child in (2 * l - 1, 2 * l):
                label = make_label(k + 1, child)
                vertices.append(label)
                edges.append((make_label(k, l), label))
    return build_tree(vertices, edges, "0,1", "binary")


def generate_broom(n):
    """
    Веник: корень "0" и N листьев "1".."N".
    """
    _check(None if n >= 1 else "Число зубцов веника N должно быть не меньше 1.")
    vertices = ["0"] + [str(i) for i in range(1, n + 1)]
    edges = [("0", str(i)) for i in range(1, n + 1)]
    return build_tree(vertices, edges, "0", "broom")


def generate_two_level_broom(n):
    """
    Двухуровневый веник: корень "0", дети (1,j) и внуки (2,j), j = 1..N.
    """
    _check(None if n >= 1 else "Число зубцов веника N должно быть не меньше 1.")
    vertices = ["0"]
    edges = []
    for j in range(1, n + 1):
        vertices += [make_label(1, j), make_label(2, j)]
        edges += [("0", make_label(1, j)), (make_label(1, j), make_label(2, j))]
    return build_tree(vertices, edges, "0", "two_level_broom")


def generate_uneven_fork(stem=0):
    """
    Развилка с ветвями длины 1 и 2: вершины 0, (1,1), (2,1), (2,2) и ствол -stem..-1 над вершиной 0.
    stem = 0 даёт дерево из четырёх вершин, stem = 1 добавляет вершину -1.
    """
    _check(None if stem >= 0 else "Длина ствола должна быть неотрицательной.")
    trunk = [str(-k) for k in range(stem, -1, -1)]
    vertices = trunk + ["1,1", "2,1", "2,2"]
    edges = list(zip(trunk, trunk[1:])) + [("0", "1,1"), ("0", "2,1"), ("2,1", "2,2")]
    return build_tree(vertices, edges, trunk[0], "uneven_fork")


def generate_random_tree(n, rng):
    """
    Случайное рекурсивное дерево: вершина i выбирает родителя равновероятно среди 0..i-1.
    :param n: Число вершин.
    :param rng: numpy.random.Generator
    """
    _check(None if n >= 1 else "Число вершин должно быть не меньше 1.")
    edges = [(str(int(rng.integers(0, i))), str(i)) for i in range(1, n)]
    return build_tree([str(i) for i in range(n)], edges, "0", "random")


class TreeFamilyParams(BaseModel):
    """
    Семейство дерева и его целочисленные параметры.
    """
    family: Literal["path", "two_branch", "binary", "broom", "two_level_broom", "uneven_fork"]
    n: Optional[int] = None
    kappa: Optional[int] = None
    theta: Optional[int] = None
    stem: Optional[int] = None

    @model_validator(mode="after")
    def check_ranges(self):
        required = {
            "path": {"n": 1},
            "broom": {"n": 1},
            "two_level_broom": {"n": 1},
            "two_branch": {"kappa": 0, "theta": 1},
            "binary": {"kappa": 2},
            "uneven_fork": {"stem": 0},
        }[self.family]
        for name, minimum in required.items():
            value = getattr(self, name)
            if name == "stem" and value is None:
                continue
            if value is None:
                raise ValueError(f"для семейства {self.family} нужен параметр {name}")
            if value < minimum:
                raise ValueError(f"параметр {name} семейства {self.family} должен быть не меньше {minimum}")
        return self


def generate_tree(params):
    """
    Выбор генератора по семейству.
    :param params: TreeFamilyParams или словарь с теми же полями.
    :raises TreeError: Если параметры вне допустимых диапазонов.
    """
    if isinstance(params, dict):
        try:
            params = TreeFamilyParams(**params)
        except ValidationError as e:
            raise TreeError(f"Некорректные параметры семейства: {e.errors()[0]['msg']}")
    if params.family == "path":
        return generate_path(params.n)
    if params.family == "two_branch":
        return generate_two_branch(params.kappa, params.theta)
    if params.family == "binary":
        return generate_binary(params.kappa)
    if params.family == "broom":
        return generate_broom(params.n)
    if params.family == "two_level_broom":
        return generate_two_level_broom(params.n)
    return generate_uneven_fork(params.stem or 0)


def tree_to_document(tree):
    return {
        "vertices": list(tree.vertices),
        "root": tree.root,
        "edges": [[parent, child] for parent, child in tree.edges],
    }


def tree_from_document(document):
    """
    Читает дерево из JSON-документа {"vertices", "root", "edges"}.
    :raises DocumentError: Если документ не соответствует схеме или дерево некорректно.
    """
    try:
        parsed = TreeDocument.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        field_name = ".".join(str(part) for part in first["loc"])
        raise DocumentError(f"Поле '{field_name}': {first['msg']}", field_name)
    try:
        return build_tree(parsed.vertices, parsed.edges, parsed.root)
    except TreeError as e:
        logger.log(f"Документ содержит некорректное дерево: {e}", "WARNING")
        raise DocumentError(f"Поле 'edges': {e}", "edges")
