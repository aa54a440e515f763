import math

import numpy as np
import pytest

from application.services.operators.shift_operator import build_shift
from application.services.trees.tree_core import generate_uneven_fork

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def fork_tree():
    return generate_uneven_fork(0)


@pytest.fixture
def fork_weights():
    return {"1,1": 1.0, "2,1": 1.0, "2,2": SQRT2}


@pytest.fixture
def fork_shift(fork_tree, fork_weights):
    return build_shift(fork_tree, fork_weights)


@pytest.fixture
def stem_tree():
    return generate_uneven_fork(1)


@pytest.fixture
def stem_weights():
    return {"0": 1.0, "1,1": 1.0, "2,1": 1.0, "2,2": 1.0}


@pytest.fixture
def stem_shift(stem_tree, stem_weights):
    return build_shift(stem_tree, stem_weights)


@pytest.fixture
def fork_images():
    """
    Образы базиса (e_0, e_{1,1}, e_{2,1}, e_{2,2}) под явным сопряжением для дерева-развилки.
    """
    e = np.eye(4)
    return [
        ("0", e[3]),
        ("2,2", e[0]),
        ("1,1", (e[2] - e[1]) / SQRT2),
        ("2,1", (e[1] + e[2]) / SQRT2),
    ]


def weighted_document(tree, weights):
    return {
        "vertices": list(tree.vertices),
        "root": tree.root,
        "edges": [list(edge) for edge in tree.edges],
        "weights": {label: [complex(value).real, complex(value).imag] for label, value in weights.items()},
    }
