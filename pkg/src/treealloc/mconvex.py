"""Projection onto general exchange-feasible regions, desk scale.

The feasible set of any exchange problem is the integer base polyhedron
B(rho) of an integer submodular set function rho.  Projecting a point
onto it reduces to O(n) submodular minimizations; here the minimizer is
exhaustive enumeration over subsets, guarded to n <= 16, which makes the
whole pipeline brute-force-verifiable.  A generic steepest-direction
oracle that tries all O(n^2) exchanges completes the picture for
arbitrary objectives.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .errors import BudgetError, ConsistencyError, InfeasibleError, InputError
from .model import Instance, evaluate_objective, is_feasible
from .extint import is_finite

INF = float("inf")
MAX_GROUND = 16


class SubmodularOracle:
    """Memoized set-function evaluator over bitmask subsets.

    The callable receives a frozenset of ground elements and returns an
    int or +inf.  rho(empty) must be 0 and rho(N) must be finite.
    """

    def __init__(self, n: int, fn: Callable[[frozenset[int]], int | float]):
        if n < 1:
            raise InputError(f"need n >= 1, got {n}")
        self.n = n
        self._fn = fn
        self._vals: dict[int, int | float] = {}
        if self.value_mask(0) != 0:
            raise InputError("rho(empty set) must be 0")
        if self.value_mask((1 << n) - 1) == INF:
            raise InfeasibleError("rho(N) must be finite")

    def value_mask(self, mask: int) -> int | float:
        v = self._vals.get(mask)
        if v is None:
            v = self._fn(frozenset(_mask_elems(mask)))
            self._vals[mask] = v
        return v

    def value(self, subset: Iterable[int]) -> int | float:
        mask = 0
        for e in subset:
            mask |= 1 << e
        return self.value_mask(mask)


def _mask_elems(mask: int) -> list[int]:
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return out


def _guard_scale(n: int) -> None:
    if n > MAX_GROUND:
        raise BudgetError(
            f"subset enumeration is limited to n <= {MAX_GROUND} (got {n}); "
            "polynomial submodular minimization is out of scope"
        )


def _shift_sums(n: int, shift: Sequence[int]) -> list[int]:
    sums = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + shift[low.bit_length() - 1]
    return sums


def verify_submodularity(rho: SubmodularOracle) -> bool:
    """Exhaustive diminishing-returns check; only sensible at small n."""
    _guard_scale(rho.n)
    n = rho.n
    for mask in range(1 << n):
        for i in range(n):
            if mask >> i & 1:
                continue
            for j in range(i + 1, n):
                if mask >> j & 1:
                    continue
                base = rho.value_mask(mask)
                wi = rho.value_mask(mask | 1 << i)
                wj = rho.value_mask(mask | 1 << j)
                wij = rho.value_mask(mask | 1 << i | 1 << j)
                if wi + wj < base + wij:
                    return False
    return True


def brute_sfm(
    rho: SubmodularOracle, shift: Sequence[int] | None = None
) -> tuple[int | float, frozenset[int]]:
    """Exact minimum of rho(X) + shift(X) over all subsets.

    Ties resolve to the lexicographically smallest set (compared as
    sorted element tuples).
    """
    _guard_scale(rho.n)
    n = rho.n
    if shift is None:
        shift = [0] * n
    if len(shift) != n:
        raise InputError(f"shift has {len(shift)} entries, expected {n}")
    sums = _shift_sums(n, shift)
    best_val: int | float = rho.value_mask(0)
    best_set: tuple[int, ...] = ()
    for mask in range(1, 1 << n):
        v = rho.value_mask(mask) + sums[mask]
        if v < best_val:
            best_val = v
            best_set = tuple(_mask_elems(mask))
        elif v == best_val:
            cand = tuple(_mask_elems(mask))
            if cand < best_set:
                best_set = cand
    return best_val, frozenset(best_set)


def project_to_base(rho: SubmodularOracle, target: Sequence[int]) -> list[int]:
    """L1-closest point of B(rho) to an integer target.

    Pipeline: translate so the target is the origin; the optimal-value
    set of max{x(N) : x in P(rho'), x <= 0} is the base polyhedron of
    the monotonized function X -> min over subsets of X, whose prefix
    greedy point is then lifted back onto B(rho') by adding saturation
    capacities coordinate by coordinate.  Everything stays integral.
    """
    _guard_scale(rho.n)
    n = rho.n
    if len(target) != n:
        raise InputError(f"target has {len(target)} entries, expected {n}")
    target = [int(t) for t in target]
    full = (1 << n) - 1
    rho_n = rho.value_mask(full)
    if rho_n == INF:
        raise InfeasibleError("rho(N) must be finite")

    tshift = [-t for t in target]
    tsums = _shift_sums(n, tshift)
    min_translated, _ = brute_sfm(rho, tshift)

    # the masked-minimization constant must exceed every value gap so no
    # minimizer leaves the mask
    m_const = max(
        rho_n + sum(abs(t) for t in target) + 1,
        1 - min_translated,
    )

    def monotonized_prefix(i: int) -> int | float:
        # min over subsets of {0..i-1} of rho'(Y), via a masked shift
        shift = [tshift[k] if k < i else tshift[k] + m_const for k in range(n)]
        val, _ = brute_sfm(rho, shift)
        return val

    r0 = [0] * (n + 1)
    for i in range(1, n + 1):
        r0[i] = monotonized_prefix(i)
    x = [r0[i + 1] - r0[i] for i in range(n)]

    # lift onto the base: raise each coordinate by its saturation capacity
    for i in range(n):
        xsums = _shift_sums(n, x)
        cap: int | float = INF
        for mask in range(1 << n):
            if not mask >> i & 1:
                continue
            v = rho.value_mask(mask)
            if v == INF:
                continue
            c = v + tsums[mask] - xsums[mask]
            if c < cap:
                cap = c
        if cap == INF or cap < 0:
            raise ConsistencyError(f"bad saturation capacity {cap} at element {i}")
        x[i] += cap

    if sum(x) != rho_n + tsums[full]:
        raise ConsistencyError("lifted point does not lie on the base hyperplane")
    achieved = sum(abs(v) for v in x)
    expected = (rho_n + tsums[full]) - 2 * min_translated
    if achieved != expected:
        raise ConsistencyError(
            f"projection distance {achieved} != min-max value {expected}"
        )
    return [x[i] + target[i] for i in range(n)]


class MConvexOracle:
    """Function oracle: any integer vector -> value, +inf when infeasible."""

    def __init__(
        self,
        n: int,
        value_fn: Callable[[Sequence[int]], float],
        domain: SubmodularOracle | None = None,
    ):
        self.n = n
        self._fn = value_fn
        self.domain = domain

    def value(self, x: Sequence[int]) -> float:
        return self._fn(x)


def generic_steepest_direction(
    f: MConvexOracle, x: Sequence[int]
) -> tuple[int, int, float] | None:
    """Best exchange by evaluating all n(n-1) moves; ties to smallest (i, j)."""
    fx = f.value(x)
    if fx == INF:
        raise InputError("generic direction needs a feasible (finite-value) point")
    n = f.n
    y = list(x)
    best: tuple[int, int, float] | None = None
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            y[i] -= 1
            y[j] += 1
            v = f.value(y)
            y[i] += 1
            y[j] -= 1
            if v < INF:
                delta = v - fx
                if best is None or delta < best[2]:
                    best = (i, j, delta)
    return best


class GenericDirectionOracle:
    """DirectionOracle adapter around generic_steepest_direction."""

    def __init__(self, f: MConvexOracle):
        self.f = f

    def direction(self, x: Sequence[int]) -> tuple[int, int, float] | None:
        return generic_steepest_direction(self.f, x)

    def apply(self, i: int, j: int) -> None:
        pass


def laminar_mconvex(inst: Instance) -> MConvexOracle:
    """Wrap a laminar instance as a plain function oracle."""

    def value(x: Sequence[int]) -> float:
        ok, _ = is_feasible(inst, x)
        if not ok:
            return INF
        return evaluate_objective(inst, x)

    return MConvexOracle(inst.n, value)


def box_rho(inst: Instance) -> SubmodularOracle:
    """Submodular description of a box feasible set: X -> max of x(X).

    rho(X) = min(u(X), R - l(N\\X)); requires finite leaf bounds and a
    non-empty feasible region.
    """
    from .descent_heap import is_box_instance

    if not is_box_instance(inst):
        raise InputError("box_rho needs a box instance")
    tree = inst.tree
    leaves = [tree.nodes[tree.leaf_ids[i]] for i in range(inst.n)]
    lo = [nd.lo for nd in leaves]
    hi = [nd.hi for nd in leaves]
    if not all(is_finite(v) for v in lo) or not all(is_finite(v) for v in hi):
        raise InputError("box_rho needs finite leaf bounds")
    if sum(lo) > inst.R or sum(hi) < inst.R:
        raise InfeasibleError("box instance has an empty feasible region")
    R = inst.R
    n = inst.n

    def rho(X: frozenset[int]) -> int:
        if not X:
            return 0
        u_in = sum(hi[i] for i in X)
        l_out = sum(lo[i] for i in range(n) if i not in X)
        return min(u_in, R - l_out)

    return SubmodularOracle(n, rho)
