import random

import pytest

from treealloc import (
    AbsDev,
    DomainError,
    Instance,
    InputError,
    LaminarTree,
    Node,
    Quadratic,
    Reciprocal,
    StructuralError,
    ZERO,
    binarize_tree,
    enumerate_feasible,
    evaluate_objective,
    instance_from_json,
    instance_to_json,
    is_feasible,
)
from treealloc.extint import NEG_INF, POS_INF, as_ext, ext_add

from corpus_util import random_instance


def flat_instance(n, R, lo=0, hi=2, objective=None):
    nodes = [Node("N", None)]
    for i in range(n):
        nodes.append(
            Node(f"x{i}", "N", lo=lo, hi=hi, objective=objective or ZERO, element=i)
        )
    return Instance(LaminarTree(nodes), R)


class TestExtInt:
    def test_saturating_add(self):
        assert ext_add(3, 4) == 7
        assert ext_add(3, POS_INF) == POS_INF
        assert ext_add(NEG_INF, -5) == NEG_INF
        with pytest.raises(InputError):
            ext_add(POS_INF, NEG_INF)

    def test_total_order(self):
        assert NEG_INF < -(10**30) < 10**30 < POS_INF

    def test_parse(self):
        assert as_ext("-inf") == NEG_INF
        assert as_ext("+inf") == POS_INF
        assert as_ext(7) == 7
        assert as_ext(7.0) == 7
        with pytest.raises(InputError):
            as_ext(7.5)


class TestConvexKinds:
    @pytest.mark.parametrize(
        "fn,lo",
        [
            (Quadratic(2, -3, 1), -8),
            (AbsDev(2), -8),
            (Reciprocal(5), 1),
            (ZERO, -8),
        ],
    )
    def test_discrete_convexity(self, fn, lo):
        for z in range(lo + 1, lo + 15):
            assert fn(z - 1) + fn(z + 1) >= 2 * fn(z) - 1e-12

    def test_reciprocal_domain(self):
        with pytest.raises(DomainError):
            Reciprocal(1)(0)

    def test_pwl_eval_and_convexity(self):
        from treealloc import PiecewiseLinear

        f = PiecewiseLinear([(-2, 4), (0, 0), (1, 1), (3, 7)])
        assert f(-2) == 4 and f(0) == 0 and f(1) == 1 and f(3) == 7
        assert f(2) == 4  # interpolated on slope 3
        assert f(-4) == 8  # extended left slope -2
        assert f(5) == 13  # extended right slope 3
        with pytest.raises(InputError):
            PiecewiseLinear([(0, 0), (1, 5), (2, 5)])  # slope drops 5 -> 0


class TestBinarize:
    def test_three_way_split(self):
        nodes = [Node("N", None)] + [Node(f"x{i}", "N", element=i) for i in range(3)]
        tree = binarize_tree(LaminarTree(nodes))
        assert tree.is_binary()
        root_kids = tree.nodes["N"].children
        assert root_kids[0] == "x0"
        syn = tree.nodes[root_kids[1]]
        assert syn.synthetic and syn.children == ("x1", "x2")
        assert syn.lo == NEG_INF and syn.hi == POS_INF

    def test_binary_tree_unchanged(self):
        nodes = [
            Node("N", None),
            Node("a", "N", lo=0, hi=3, element=0),
            Node("g", "N", lo=1, hi=4),
            Node("b", "g", element=1),
            Node("c", "g", element=2),
        ]
        tree = LaminarTree(nodes)
        out = binarize_tree(tree)
        assert set(out.nodes) == set(tree.nodes)
        for nid in tree.nodes:
            assert out.nodes[nid] == tree.nodes[nid]

    def test_four_way_node_count(self):
        nodes = [Node("N", None)] + [Node(f"x{i}", "N", element=i) for i in range(4)]
        tree = LaminarTree(nodes)
        out = binarize_tree(tree)
        assert out.is_binary()
        assert len(out.nodes) == 7 <= 2 * len(tree.nodes)

    def test_preserves_feasible_set_and_objective(self):
        rng = random.Random(99)
        for _ in range(120):
            inst = random_instance(rng, n_max=5)
            binst = inst.binarized()
            try:
                before = enumerate_feasible(inst)
            except Exception:
                continue
            after = enumerate_feasible(binst)
            assert before == after
            for x in before[:40]:
                assert evaluate_objective(inst, x) == pytest.approx(
                    evaluate_objective(binst, x), abs=1e-12
                )

    def test_malformed_trees_rejected(self):
        with pytest.raises(StructuralError):
            LaminarTree([Node("a", "b", element=0), Node("b", "a")])  # cycle
        with pytest.raises(StructuralError):
            LaminarTree(
                [Node("N", None), Node("a", "N", element=0), Node("b", "N", element=0)]
            )  # duplicated element
        with pytest.raises(StructuralError):
            LaminarTree([Node("N", None), Node("g", "N"), Node("a", "g", element=0)])


class TestEvaluate:
    def test_zero_everywhere(self):
        inst = flat_instance(3, 4, hi=4)
        assert evaluate_objective(inst, [1, 1, 2]) == 0.0

    def test_quadratic_leaves(self):
        inst = flat_instance(2, 3, hi=4, objective=Quadratic(1))
        assert evaluate_objective(inst, [1, 2]) == 5.0

    def test_reciprocal_tree(self):
        nodes = [
            Node("N", None, lo=2, hi=2, objective=Reciprocal(3)),
            Node("a", "N", lo=1, hi=2, objective=Reciprocal(1), element=0),
            Node("b", "N", lo=1, hi=2, objective=Reciprocal(2), element=1),
        ]
        inst = Instance(LaminarTree(nodes), 2)
        assert evaluate_objective(inst, [1, 1]) == pytest.approx(1 / 1 + 2 / 1 + 3 / 2)

    def test_domain_error_names_node(self):
        nodes = [
            Node("N", None),
            Node("a", "N", lo=1, hi=9, objective=Reciprocal(1), element=0),
            Node("b", "N", lo=0, hi=9, element=1),
        ]
        inst = Instance(LaminarTree(nodes), 3)
        with pytest.raises(DomainError, match="'a'"):
            evaluate_objective(inst, [0, 3])

    def test_exact_integer_quadratics(self):
        big = 10**8
        inst = flat_instance(2, 2 * big, hi=2 * big, objective=Quadratic(1, 1, 0))
        v = evaluate_objective(inst, [big, big])
        assert v == float(2 * (big * big + big))


class TestFeasible:
    def test_examples(self):
        inst = flat_instance(2, 3, lo=0, hi=2)
        assert is_feasible(inst, [1, 2]) == (True, None)
        ok, nid = is_feasible(inst, [3, 0])
        assert not ok and nid == "x0"
        ok, nid = is_feasible(inst, [1, 1])
        assert not ok and nid == "N"


class TestJson:
    def test_round_trip(self):
        rng = random.Random(4)
        for _ in range(40):
            inst = random_instance(rng)
            obj = instance_to_json(inst)
            back = instance_from_json(obj)
            assert instance_to_json(back) == obj

    def test_infinite_bounds_and_defaults(self):
        obj = {
            "n": 2,
            "R": 5,
            "nodes": [
                {"id": "N", "parent": None, "elements": None, "l": 0, "u": "+inf",
                 "objective": {"kind": "zero"}},
                {"id": "a", "parent": "N", "elements": [0], "l": "-inf", "u": 3,
                 "objective": {"kind": "quadratic", "a": 1, "b": 0, "c": 0}},
                {"id": "b", "parent": "N", "elements": [1]},
            ],
        }
        inst = instance_from_json(obj)
        assert inst.tree.nodes["a"].lo == NEG_INF
        assert inst.tree.nodes["b"].hi == POS_INF
        # root bounds pinned to R
        assert inst.tree.nodes["N"].lo == 5 and inst.tree.nodes["N"].hi == 5

    def test_declared_elements_must_match(self):
        obj = {
            "n": 2,
            "R": 1,
            "nodes": [
                {"id": "N", "parent": None, "elements": [0]},
                {"id": "a", "parent": "N", "elements": [0]},
                {"id": "b", "parent": "N", "elements": [1]},
            ],
        }
        with pytest.raises(StructuralError, match="declared elements"):
            instance_from_json(obj)
