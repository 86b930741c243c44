"""Seeded random-instance corpus shared by unit and acceptance tests."""

from __future__ import annotations

import random

from treealloc import (
    AbsDev,
    BudgetError,
    Instance,
    LaminarTree,
    Node,
    PiecewiseLinear,
    Quadratic,
    Reciprocal,
    ZERO,
    brute_minimize,
    enumerate_feasible,
)
from treealloc.extint import NEG_INF, POS_INF, is_finite


def random_objective(rng: random.Random, lo_bound) -> object:
    kinds = ["quadratic", "quadratic", "abs", "zero", "pwl"]
    if is_finite(lo_bound) and lo_bound >= 1:
        kinds.append("reciprocal")
    k = rng.choice(kinds)
    if k == "quadratic":
        return Quadratic(rng.randint(0, 3), rng.randint(-6, 6), rng.randint(-3, 3))
    if k == "abs":
        return AbsDev(rng.randint(-5, 6))
    if k == "zero":
        return ZERO
    if k == "reciprocal":
        return Reciprocal(rng.randint(1, 9))
    xs = [rng.randint(-4, 0)]
    for _ in range(rng.randint(1, 3)):
        xs.append(xs[-1] + rng.randint(1, 3))
    slopes = sorted(rng.randint(-3, 3) for _ in range(len(xs) - 1))
    y = rng.randint(-3, 3)
    ys = [y]
    for s, x0, x1 in zip(slopes, xs, xs[1:]):
        y += s * (x1 - x0)
        ys.append(y)
    return PiecewiseLinear(list(zip(xs, ys)))


def _partition(rng: random.Random, elems: list[int]) -> list[list[int]]:
    k = rng.randint(2, min(3, len(elems)))
    pools: list[list[int]] = [[] for _ in range(k)]
    for idx, e in enumerate(elems):
        pools[idx % k].append(e)
    rng.shuffle(pools)
    return pools


def _structure(rng: random.Random, n: int, family: str) -> list[tuple[str, str | None, int | None]]:
    """(id, parent, element) triples; root first."""
    rows: list[tuple[str, str | None, int | None]] = [("N", None, None)]
    if n == 1:
        return [("N", None, 0)]
    if family == "box":
        rows += [(f"x{i}", "N", i) for i in range(n)]
        return rows
    if family == "nested":
        parent = "N"
        for depth in range(n - 2):
            inner = f"p{n - 2 - depth}"  # prefix {0..n-2-depth}
            rows.append((f"x{n - 1 - depth}", parent, n - 1 - depth))
            rows.append((inner, parent, None))
            parent = inner
        rows.append((f"x{1}", parent, 1))
        rows.append((f"x{0}", parent, 0))
        return rows
    # laminar: random recursive partition
    counter = [0]

    def rec(elems: list[int], parent: str) -> None:
        if len(elems) == 1:
            rows.append((f"x{elems[0]}", parent, elems[0]))
            return
        for group in _partition(rng, elems):
            if len(group) == 1:
                rows.append((f"x{group[0]}", parent, group[0]))
            else:
                counter[0] += 1
                nid = f"g{counter[0]}"
                rows.append((nid, parent, None))
                rec(group, nid)

    rec(list(range(n)), "N")
    return rows


def random_instance(
    rng: random.Random,
    *,
    n_max: int = 6,
    families: tuple[str, ...] = ("box", "nested", "laminar"),
    feasible_bias: bool = True,
    allow_n1: bool = False,
) -> Instance:
    n = 1 if (allow_n1 and rng.random() < 0.05) else rng.randint(2, n_max)
    family = rng.choice(families)
    rows = _structure(rng, n, family)

    leaf_bounds: dict[int, tuple[int, int]] = {}
    for e in range(n):
        a = 1 if rng.random() < 0.3 else rng.randint(-2, 3)
        leaf_bounds[e] = (a, a + rng.randint(0, 5))

    mid_sum = sum((lo + hi) // 2 for lo, hi in leaf_bounds.values())
    if feasible_bias:
        R = mid_sum + rng.randint(-2, 2)
        R = max(sum(b[0] for b in leaf_bounds.values()),
                min(R, sum(b[1] for b in leaf_bounds.values())))
    else:
        R = rng.randint(-3, 12)
    R = max(-12, min(R, 12))

    # element sets per internal node, to scale internal windows
    elems_under: dict[str, list[int]] = {}
    for nid, parent, element in reversed(rows):
        if element is not None:
            elems_under[nid] = [element]
        else:
            elems_under.setdefault(nid, [])
    for nid, parent, element in reversed(rows):
        if parent is not None:
            elems_under.setdefault(parent, [])
            elems_under[parent] = sorted(set(elems_under[parent]) | set(elems_under[nid]))

    nodes: list[Node] = []
    for nid, parent, element in rows:
        if element is not None:
            lo, hi = leaf_bounds[element]
        elif parent is None:
            lo, hi = NEG_INF, POS_INF  # root bounds come from R
        elif rng.random() < 0.35:
            base = sum((leaf_bounds[e][0] + leaf_bounds[e][1]) // 2 for e in elems_under[nid])
            lo = base - rng.randint(0, 3)
            hi = lo + rng.randint(0, 6)
            if rng.random() < 0.3:
                lo = NEG_INF
            elif rng.random() < 0.3:
                hi = POS_INF
        else:
            lo, hi = NEG_INF, POS_INF
        if element is not None:
            obj = random_objective(rng, lo)
        else:
            root_lo = R if parent is None else lo
            obj = ZERO if rng.random() < 0.5 else random_objective(rng, root_lo)
        nodes.append(
            Node(id=nid, parent=parent, lo=lo, hi=hi, objective=obj, element=element)
        )
    return Instance(LaminarTree(nodes), R)


def feasible_corpus(seed: int, count: int, *, max_points: int = 150, unique_only: bool = False):
    """Yield (instance, feasible list, BruteMin) for solvable random instances."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        inst = random_instance(rng).binarized()
        try:
            feas = enumerate_feasible(inst)
        except BudgetError:
            continue
        if not feas or len(feas) > max_points:
            continue
        bm = brute_minimize(inst)
        if unique_only and not bm.unique:
            continue
        made += 1
        yield inst, feas, bm


def random_box_instance(rng: random.Random, *, n_max: int = 8) -> Instance:
    return random_instance(rng, n_max=n_max, families=("box",))


def random_prediction(rng: random.Random, inst: Instance) -> list[float]:
    out = []
    for i in range(inst.n):
        nd = inst.tree.nodes[inst.tree.leaf_ids[i]]
        lo = nd.lo if is_finite(nd.lo) else -4
        hi = nd.hi if is_finite(nd.hi) else 8
        out.append(rng.uniform(lo - 2.5, hi + 2.5))
    return out
