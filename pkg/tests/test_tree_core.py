import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from application.services.trees.tree_core import (
    DirectedTree, TreeFamilyParams, build_tree, generate_binary, generate_broom, generate_path,
    generate_random_tree, generate_tree, generate_two_branch, generate_two_level_broom, generate_uneven_fork,
    label_key, tree_from_document, tree_to_document, validate_tree,
)
from utils.errors import DocumentError, TreeError


def test_single_vertex_is_valid():
    assert validate_tree(DirectedTree(("0",), (), "0")).ok


def test_two_parents_reported():
    tree = DirectedTree(("0", "1", "2"), (("0", "1"), ("2", "1")), "0")
    report = validate_tree(tree)
    assert not report.ok
    kinds = {(v.kind, v.subject) for v in report.violations}
    assert ("two_parents", "1") in kinds
    message = next(v.message for v in report.violations if v.kind == "two_parents")
    assert "vertex 1 has two parents" in message


def test_cycle_is_reported():
    tree = DirectedTree(("0", "1", "2"), (("0", "1"), ("2", "2")), "0")
    assert not validate_tree(tree).ok


def test_fork_tree_from_worked_example():
    tree = generate_uneven_fork(0)
    assert validate_tree(tree).ok
    assert tree.vertices == ("0", "1,1", "2,1", "2,2")
    assert tree.children("0") == ["1,1", "2,1"]
    assert tree.parent("2,2") == "2,1"


def test_fork_with_stem():
    tree = generate_uneven_fork(1)
    assert tree.root == "-1"
    assert tree.size == 5
    assert tree.depth == 3


def test_two_branch_counts():
    tree = generate_two_branch(1, 2)
    assert set(tree.vertices) == {"-1", "0", "1,1", "1,2", "2,1", "2,2"}
    assert tree.root == "-1"

    smallest = generate_two_branch(0, 1)
    assert smallest.size == 3
    assert smallest.children(smallest.root) == ["1,1", "2,1"]
    assert set(smallest.leaves) == {"1,1", "2,1"}

    tree = generate_two_branch(2, 3)
    assert tree.depth == 5
    assert tree.branching_vertices == ["0"]


@pytest.mark.parametrize("kappa,theta", [(0, 1), (1, 2), (2, 3), (3, 4), (2, 1)])
def test_two_branch_invariants(kappa, theta):
    tree = generate_two_branch(kappa, theta)
    assert validate_tree(tree).ok
    assert tree.size == kappa + 1 + 2 * theta
    assert tree.depth == kappa + theta
    assert len(tree.branching_vertices) == 1
    assert len(tree.children("0")) == 2


@pytest.mark.parametrize("kappa", [2, 3, 4])
def test_binary_invariants(kappa):
    tree = generate_binary(kappa)
    assert validate_tree(tree).ok
    assert tree.size == 2 ** (kappa + 1) - 1
    assert tree.depth == kappa
    assert len(tree.branching_vertices) == 2 ** kappa - 1
    assert all(tree.depth_of(leaf) == kappa for leaf in tree.leaves)
    assert all(len(tree.children(v)) in (0, 2) for v in tree.vertices)


def test_binary_child_rule():
    tree = generate_binary(2)
    assert tree.children("1,2") == ["2,3", "2,4"]
    assert tree.children("1,1") == ["2,1", "2,2"]


def test_binary_rejects_small_depth():
    with pytest.raises(TreeError):
        generate_binary(1)


def test_small_families():
    path = generate_path(4)
    assert path.size == 4 and path.depth == 3
    broom = generate_broom(3)
    assert broom.size == 4 and len(broom.leaves) == 3 and broom.depth == 1
    two_level = generate_two_level_broom(2)
    assert two_level.size == 5 and two_level.depth == 2
    assert two_level.children("1,2") == ["2,2"]


@pytest.mark.parametrize("generator,argument", [
    (generate_path, 0), (generate_broom, 0), (generate_two_level_broom, 0),
])
def test_parameters_out_of_range(generator, argument):
    with pytest.raises(TreeError):
        generator(argument)


def test_two_branch_parameters_out_of_range():
    with pytest.raises(TreeError):
        generate_two_branch(-1, 2)
    with pytest.raises(TreeError):
        generate_two_branch(1, 0)


def test_generation_is_deterministic():
    assert generate_two_branch(2, 3).vertices == generate_two_branch(2, 3).vertices
    assert generate_binary(3) == generate_binary(3)


def test_generate_tree_dispatch():
    assert generate_tree({"family": "two_branch", "kappa": 1, "theta": 2}).size == 6
    assert generate_tree(TreeFamilyParams(family="binary", kappa=2)).size == 7
    assert generate_tree({"family": "uneven_fork"}).size == 4
    with pytest.raises(TreeError):
        generate_tree({"family": "binary", "kappa": 1})
    with pytest.raises(TreeError):
        generate_tree({"family": "path"})


def test_label_key_orders_numerically():
    labels = ["10", "2", "-3", "1,10", "1,2"]
    assert sorted(labels, key=label_key) == ["-3", "1,2", "1,10", "2", "10"]


def test_document_round_trip():
    tree = generate_two_branch(1, 2)
    assert tree_from_document(tree_to_document(tree)) == tree


def test_document_errors_name_the_field():
    with pytest.raises(DocumentError) as error:
        tree_from_document({"vertices": ["0"], "edges": []})
    assert error.value.field == "root"

    with pytest.raises(DocumentError) as error:
        tree_from_document({"vertices": ["0", "1", "2"], "root": "0", "edges": [["0", "1"], ["2", "1"]]})
    assert error.value.field == "edges"


def test_build_tree_reorders_vertices():
    tree = build_tree(["2", "0", "1"], [("0", "2"), ("0", "1")], "0")
    assert tree.vertices == ("0", "1", "2")


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=1, max_value=25), st.integers(min_value=0, max_value=10 ** 6))
def test_random_trees_are_valid(n, seed):
    tree = generate_random_tree(n, np.random.default_rng(seed))
    assert validate_tree(tree).ok
    assert tree.size == n
    assert len(tree.edges) == n - 1
    for v in tree.non_root:
        assert tree.depth_of(v) == tree.depth_of(tree.parent(v)) + 1
