"""Laminar allocation instances.

A problem is a rooted tree over the ground set {0, .., n-1}: leaves are
the singletons, every internal node is the disjoint union of its
children, and each node carries integer bounds on its subtree sum plus a
univariate convex cost of that sum.  The root sum is pinned to the
resource total R.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .convex import ConvexFn, Reciprocal, ZERO, objective_from_json
from .errors import DomainError, InputError, StructuralError
from .extint import ExtInt, NEG_INF, POS_INF, as_ext, ext_to_json, is_finite


@dataclass(frozen=True)
class Node:
    id: str
    parent: str | None
    lo: ExtInt = NEG_INF
    hi: ExtInt = POS_INF
    objective: ConvexFn = ZERO
    element: int | None = None  # ground element for leaves, None for internal
    synthetic: bool = False
    children: tuple[str, ...] = ()


class LaminarTree:
    """Validated rooted-tree encoding of a laminar family.

    Children order follows the order nodes appear in the input; the
    structure is immutable after construction.
    """

    def __init__(self, nodes: Iterable[Node]):
        nodes = list(nodes)
        ids = [nd.id for nd in nodes]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise StructuralError(f"duplicate node id {dup!r}")
        by_id = {nd.id: nd for nd in nodes}

        roots = [nd.id for nd in nodes if nd.parent is None]
        if len(roots) != 1:
            raise StructuralError(f"expected exactly one root, found {len(roots)}")
        root_id = roots[0]

        children: dict[str, list[str]] = {nd.id: [] for nd in nodes}
        for nd in nodes:
            if nd.parent is None:
                continue
            if nd.parent not in by_id:
                raise StructuralError(f"node {nd.id!r} has unknown parent {nd.parent!r}")
            children[nd.parent].append(nd.id)

        # DFS from the root; anything unreached is disconnected or cyclic.
        order: list[str] = []
        stack = [root_id]
        while stack:
            nid = stack.pop()
            order.append(nid)
            stack.extend(reversed(children[nid]))
        if len(order) != len(nodes):
            missing = next(i for i in ids if i not in set(order))
            raise StructuralError(f"node {missing!r} is not reachable from the root (cycle?)")

        self.nodes: dict[str, Node] = {}
        elements: dict[int, str] = {}
        for nd in nodes:
            kids = tuple(children[nd.id])
            if kids:
                if nd.element is not None:
                    raise StructuralError(f"internal node {nd.id!r} declares an element")
                if len(kids) == 1:
                    raise StructuralError(
                        f"node {nd.id!r} has a single child, duplicating its element set"
                    )
            else:
                if nd.element is None or nd.element < 0:
                    raise StructuralError(f"leaf {nd.id!r} needs a ground element >= 0")
                if nd.element in elements:
                    raise StructuralError(
                        f"element {nd.element} duplicated at {elements[nd.element]!r} and {nd.id!r}"
                    )
                elements[nd.element] = nd.id
            if nd.lo == POS_INF or nd.hi == NEG_INF:
                raise InputError(f"node {nd.id!r}: bound interval [{nd.lo}, {nd.hi}] is void")
            if is_finite(nd.lo) and is_finite(nd.hi) and nd.lo > nd.hi:
                raise InputError(f"node {nd.id!r}: empty bound interval [{nd.lo}, {nd.hi}]")
            self.nodes[nd.id] = replace(nd, children=kids)

        n = len(elements)
        if set(elements) != set(range(n)):
            raise StructuralError(f"leaf elements must be exactly 0..{n - 1}")
        self.n = n
        self.root_id = root_id
        self.leaf_ids: tuple[str, ...] = tuple(elements[i] for i in range(n))

        post: list[str] = []
        stack2: list[tuple[str, bool]] = [(root_id, False)]
        while stack2:
            nid, expanded = stack2.pop()
            if expanded:
                post.append(nid)
                continue
            stack2.append((nid, True))
            for c in reversed(self.nodes[nid].children):
                stack2.append((c, False))
        self.postorder: tuple[str, ...] = tuple(post)

    def node(self, nid: str) -> Node:
        return self.nodes[nid]

    def is_binary(self) -> bool:
        return all(len(nd.children) in (0, 2) for nd in self.nodes.values())

    def depths(self) -> dict[str, int]:
        d = {self.root_id: 0}
        for nid in reversed(self.postorder):
            for c in self.nodes[nid].children:
                d[c] = d[nid] + 1
        return d


def binarize_tree(tree: LaminarTree) -> LaminarTree:
    """Split every node with more than two children into a left-leaning chain.

    Children are folded in stored order ("one and the others"); original
    nodes keep their ids, inserted nodes are unbounded, cost-free, and
    flagged synthetic.  Feasible set and objective are unchanged.
    """
    used = set(tree.nodes)
    synths: list[Node] = []
    reparent: dict[str, str] = {}

    for nid in tree.postorder:
        nd = tree.nodes[nid]
        kids = nd.children
        if len(kids) <= 2:
            continue
        holder = nd.id
        for k in range(len(kids) - 2):
            sid = f"{nd.id}~{k + 1}"
            while sid in used:
                sid += "~"
            used.add(sid)
            synths.append(Node(id=sid, parent=holder, synthetic=True))
            # kids[k] stays under holder; the rest move below the new node
            for moved in kids[k + 1 :]:
                reparent[moved] = sid
            holder = sid

    # node-list order decides children order: originals keep their relative
    # order, synthetic chain nodes follow at the end in creation order
    final: list[Node] = []
    for nid in _input_order(tree):
        nd = tree.nodes[nid]
        final.append(replace(nd, parent=reparent.get(nid, nd.parent), children=()))
    final.extend(synths)
    return LaminarTree(final)


def _input_order(tree: LaminarTree) -> list[str]:
    # preorder keeps parents before children and siblings in stored order
    order = []
    stack = [tree.root_id]
    while stack:
        nid = stack.pop()
        order.append(nid)
        stack.extend(reversed(tree.nodes[nid].children))
    return order


class Instance:
    """A laminar allocation problem: tree plus the resource total R.

    The root bounds are forced to [R, R] so the sum constraint is just
    another node bound.  Immutable after construction.
    """

    def __init__(self, tree: LaminarTree, R: int):
        if not isinstance(R, int):
            raise InputError(f"R must be an integer, got {R!r}")
        root = tree.nodes[tree.root_id]
        if root.lo != R or root.hi != R:
            nodes = [
                replace(nd, lo=R, hi=R, children=()) if nd.id == tree.root_id
                else replace(nd, children=())
                for nd in (tree.nodes[i] for i in _input_order(tree))
            ]
            tree = LaminarTree(nodes)
        for nd in tree.nodes.values():
            if isinstance(nd.objective, Reciprocal) and (
                not is_finite(nd.lo) or nd.lo < 1
            ):
                raise InputError(
                    f"node {nd.id!r}: reciprocal objective needs a finite lower bound >= 1"
                )
        self.tree = tree
        self.R = R
        self.n = tree.n
        self._binarized: Instance | None = None

    def binarized(self) -> Instance:
        """Return an equivalent instance whose tree is binary (cached)."""
        if self.tree.is_binary():
            return self
        if self._binarized is None:
            self._binarized = Instance(binarize_tree(self.tree), self.R)
        return self._binarized


def node_sums(tree: LaminarTree, x: Sequence[int]) -> dict[str, int]:
    """Subtree sums x(Y) for every node, one bottom-up pass."""
    sums: dict[str, int] = {}
    for nid in tree.postorder:
        nd = tree.nodes[nid]
        if nd.children:
            sums[nid] = sum(sums[c] for c in nd.children)
        else:
            sums[nid] = x[nd.element]
    return sums


def evaluate_objective(inst: Instance, x: Sequence[int]) -> float:
    """Sum of node costs f_Y(x(Y)) over non-synthetic nodes."""
    if len(x) != inst.n:
        raise InputError(f"solution has {len(x)} entries, expected {inst.n}")
    tree = inst.tree
    total: int | float = 0
    sums: dict[str, int] = {}
    for nid in tree.postorder:
        nd = tree.nodes[nid]
        s = sum(sums[c] for c in nd.children) if nd.children else x[nd.element]
        sums[nid] = s
        if nd.synthetic:
            continue
        try:
            total += nd.objective(s)
        except DomainError as e:
            raise DomainError(f"node {nid!r}: {e}") from None
    return float(total)


def is_feasible(inst: Instance, x: Sequence[int]) -> tuple[bool, str | None]:
    """Check all node bounds (root included, hence x(N)=R).

    Returns (True, None) or (False, id of the first violated node in
    postorder).
    """
    if len(x) != inst.n:
        raise InputError(f"solution has {len(x)} entries, expected {inst.n}")
    tree = inst.tree
    sums: dict[str, int] = {}
    for nid in tree.postorder:
        nd = tree.nodes[nid]
        s = sum(sums[c] for c in nd.children) if nd.children else x[nd.element]
        sums[nid] = s
        if s < nd.lo or s > nd.hi:
            return False, nid
    return True, None


def l1_distance(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise InputError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(abs(u - v) for u, v in zip(a, b))


# ---------------------------------------------------------------------------
# JSON interchange


def instance_to_json(inst: Instance) -> dict:
    nodes = []
    for nid in _input_order(inst.tree):
        nd = inst.tree.nodes[nid]
        nodes.append(
            {
                "id": nd.id,
                "parent": nd.parent,
                "elements": [nd.element] if nd.element is not None else None,
                "l": ext_to_json(nd.lo),
                "u": ext_to_json(nd.hi),
                "objective": nd.objective.to_json(),
            }
        )
    return {"n": inst.n, "R": inst.R, "nodes": nodes}


def instance_from_json(obj: dict) -> Instance:
    try:
        n = int(obj["n"])
        R = int(obj["R"])
        raw_nodes = obj["nodes"]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed instance JSON: {e}") from None

    nodes: list[Node] = []
    declared: dict[str, set[int]] = {}
    for rec in raw_nodes:
        elements = rec.get("elements")
        element = None
        if elements is not None and len(elements) == 1:
            element = int(elements[0])
        elif elements is not None:
            declared[rec["id"]] = set(int(e) for e in elements)
        nodes.append(
            Node(
                id=str(rec["id"]),
                parent=None if rec.get("parent") is None else str(rec["parent"]),
                lo=as_ext(rec.get("l", NEG_INF)),
                hi=as_ext(rec.get("u", POS_INF)),
                objective=objective_from_json(rec.get("objective")),
                element=element,
            )
        )
    tree = LaminarTree(nodes)
    if tree.n != n:
        raise InputError(f"instance declares n={n} but has {tree.n} leaves")

    if declared:
        under: dict[str, set[int]] = {}
        for nid in tree.postorder:
            nd = tree.nodes[nid]
            if nd.children:
                under[nid] = set().union(*(under[c] for c in nd.children))
            else:
                under[nid] = {nd.element}
        for nid, decl in declared.items():
            if decl != under[nid]:
                raise StructuralError(
                    f"node {nid!r}: declared elements {sorted(decl)} do not match "
                    f"the union of its children {sorted(under[nid])}"
                )
    return Instance(tree, R)


def load_instance(path: str) -> Instance:
    with open(path) as fh:
        return instance_from_json(json.load(fh))


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_json(inst), fh, indent=1)
        fh.write("\n")
