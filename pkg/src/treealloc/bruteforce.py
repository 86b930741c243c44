"""Exhaustive ground truth for small instances.

Feasible-set enumeration, global minimization, L1 projection, and a
steepest-exchange scan, all by brute force.  These are the independent
oracles the rest of the library is tested against, and they back the
`verify` CLI subcommand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import BudgetError, InfeasibleError
from .extint import ExtInt, is_finite
from .model import Instance, evaluate_objective, is_feasible

DEFAULT_MAX_POINTS = 10**6


@dataclass(frozen=True)
class EnumerationBudget:
    """Cap on the candidate space; enumeration refuses rather than truncates."""

    max_points: int = DEFAULT_MAX_POINTS


@dataclass(frozen=True)
class BruteMin:
    value: float
    minimizers: list[tuple[int, ...]]
    unique: bool


def _sub(a: ExtInt, b: ExtInt) -> ExtInt:
    # a - b where the combination (+inf) - (+inf) cannot arise by construction
    if isinstance(a, int) and isinstance(b, int):
        return a - b
    return a - b


def leaf_ranges(inst: Instance) -> list[tuple[int, int]]:
    """Finite effective range of each variable, from bounds, R, and ancestors.

    Raises BudgetError when some variable stays unbounded (enumeration
    impossible).  A reversed range means the region is provably empty.
    """
    tree = inst.tree
    # per node: leaf bound sums split into finite part and infinity count
    lo_fin: dict[str, int] = {}
    lo_inf: dict[str, int] = {}
    hi_fin: dict[str, int] = {}
    hi_inf: dict[str, int] = {}
    for nid in tree.postorder:
        nd = tree.nodes[nid]
        if nd.children:
            lo_fin[nid] = sum(lo_fin[c] for c in nd.children)
            lo_inf[nid] = sum(lo_inf[c] for c in nd.children)
            hi_fin[nid] = sum(hi_fin[c] for c in nd.children)
            hi_inf[nid] = sum(hi_inf[c] for c in nd.children)
        else:
            lo_fin[nid] = nd.lo if is_finite(nd.lo) else 0
            lo_inf[nid] = 0 if is_finite(nd.lo) else 1
            hi_fin[nid] = nd.hi if is_finite(nd.hi) else 0
            hi_inf[nid] = 0 if is_finite(nd.hi) else 1

    ranges: list[tuple[int, int]] = []
    for i in range(inst.n):
        leaf = tree.nodes[tree.leaf_ids[i]]
        leaf_lo_inf = 0 if is_finite(leaf.lo) else 1
        leaf_hi_inf = 0 if is_finite(leaf.hi) else 1
        lo_b: ExtInt = float("-inf")
        hi_b: ExtInt = float("inf")
        nid: str | None = leaf.id
        while nid is not None:
            nd = tree.nodes[nid]
            # sums over the ancestor's other leaves
            rest_hi: ExtInt
            if hi_inf[nid] - leaf_hi_inf > 0:
                rest_hi = float("inf")
            else:
                rest_hi = hi_fin[nid] - (leaf.hi if is_finite(leaf.hi) else 0)
            if lo_inf[nid] - leaf_lo_inf > 0:
                rest_lo: ExtInt = float("-inf")
            else:
                rest_lo = lo_fin[nid] - (leaf.lo if is_finite(leaf.lo) else 0)
            lo_b = max(lo_b, _sub(nd.lo, rest_hi))
            hi_b = min(hi_b, _sub(nd.hi, rest_lo))
            nid = nd.parent
        if not is_finite(lo_b) or not is_finite(hi_b):
            raise BudgetError(
                f"effective range of x_{i} is unbounded; enumeration refused"
            )
        ranges.append((lo_b, hi_b))
    return ranges


def enumerate_feasible(
    inst: Instance, budget: EnumerationBudget | None = None
) -> list[tuple[int, ...]]:
    """All feasible integer points, in lexicographic order."""
    budget = budget or EnumerationBudget()
    ranges = leaf_ranges(inst)
    if any(hi < lo for lo, hi in ranges):
        return []
    space = 1
    for lo, hi in ranges:
        space *= hi - lo + 1
        if space > budget.max_points:
            raise BudgetError(
                f"candidate space exceeds budget of {budget.max_points} points"
            )

    n = inst.n
    suffix_lo = [0] * (n + 1)
    suffix_hi = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix_lo[k] = suffix_lo[k + 1] + ranges[k][0]
        suffix_hi[k] = suffix_hi[k + 1] + ranges[k][1]

    out: list[tuple[int, ...]] = []
    x = [0] * n

    def rec(k: int, remaining: int) -> None:
        if k == n:
            if remaining == 0:
                ok, _ = is_feasible(inst, x)
                if ok:
                    out.append(tuple(x))
            return
        lo = max(ranges[k][0], remaining - suffix_hi[k + 1])
        hi = min(ranges[k][1], remaining - suffix_lo[k + 1])
        for v in range(lo, hi + 1):
            x[k] = v
            rec(k + 1, remaining - v)

    rec(0, inst.R)
    return out


def brute_minimize(
    inst: Instance, budget: EnumerationBudget | None = None, tol: float = 1e-9
) -> BruteMin:
    """Global minimum and all minimizers (objective within tol of the best)."""
    points = enumerate_feasible(inst, budget)
    if not points:
        raise InfeasibleError("no feasible point exists")
    values = [evaluate_objective(inst, p) for p in points]
    best = min(values)
    mins = [p for p, v in zip(points, values) if v <= best + tol]
    return BruteMin(value=best, minimizers=mins, unique=len(mins) == 1)


def brute_projection(
    inst: Instance,
    target: Sequence[int],
    budget: EnumerationBudget | None = None,
) -> tuple[int, list[tuple[int, ...]]]:
    """Exact minimum L1 distance from target to the feasible set, with argmins."""
    points = enumerate_feasible(inst, budget)
    if not points:
        raise InfeasibleError("no feasible point exists")
    dists = [sum(abs(a - b) for a, b in zip(p, target)) for p in points]
    best = min(dists)
    return best, [p for p, d in zip(points, dists) if d == best]


def brute_steepest(inst: Instance, x: Sequence[int]) -> tuple[int, int, float] | None:
    """Best exchange by trying every ordered pair; ties go to smallest (i, j).

    Returns None when no exchange is feasible; the reported delta may be
    non-negative (the caller owns the stopping decision).
    """
    n = inst.n
    fx = evaluate_objective(inst, x)
    best: tuple[int, int, float] | None = None
    y = list(x)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            y[i] -= 1
            y[j] += 1
            ok, _ = is_feasible(inst, y)
            if ok:
                delta = evaluate_objective(inst, y) - fx
                if best is None or delta < best[2]:
                    best = (i, j, delta)
            y[i] += 1
            y[j] -= 1
    return best
