"""Steepest exchange directions on laminar trees.

A move x - e_i + e_j changes exactly the node sums on the tree path from
leaf i to leaf j.  Encoding per-node "can decrease"/"can increase" edges
with the marginal cost of that unit change turns direction finding into
a shortest leaf-to-leaf path problem, solved by one bottom-up pass.
All arrays are indexed in postorder so a plain ascending loop visits
children before parents; nothing recurses, so chain-shaped trees of any
depth are fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConsistencyError, InputError
from .model import Instance

INF = float("inf")


class _Topology:
    """Flat postorder-indexed arrays for one binary instance."""

    __slots__ = (
        "m",
        "left",
        "right",
        "parent",
        "elem",
        "lo",
        "hi",
        "obj",
        "leaf_idx",
        "ids",
    )

    def __init__(self, inst: Instance):
        tree = inst.tree
        ids = list(tree.postorder)
        index = {nid: k for k, nid in enumerate(ids)}
        m = len(ids)
        self.m = m
        self.ids = ids
        self.left = [-1] * m
        self.right = [-1] * m
        self.parent = [-1] * m
        self.elem = [-1] * m
        self.lo = [0] * m
        self.hi = [0] * m
        self.obj = [None] * m
        self.leaf_idx = [-1] * inst.n
        for k, nid in enumerate(ids):
            nd = tree.nodes[nid]
            if nd.children:
                if len(nd.children) != 2:
                    raise InputError(
                        "direction oracle needs a binary tree; call inst.binarized() first"
                    )
                self.left[k] = index[nd.children[0]]
                self.right[k] = index[nd.children[1]]
                self.parent[self.left[k]] = k
                self.parent[self.right[k]] = k
            else:
                self.elem[k] = nd.element
                self.leaf_idx[nd.element] = k
            self.lo[k] = nd.lo
            self.hi[k] = nd.hi
            self.obj[k] = nd.objective


@dataclass
class ExchangeTree:
    """Per-iteration edge data: which unit moves are allowed and their cost."""

    topo: _Topology
    sums: list[int]
    up_ok: list[bool]
    dn_ok: list[bool]
    w_up: list[float]
    w_dn: list[float]


def build_exchange_tree(inst: Instance, x: Sequence[int], *, _topo: _Topology | None = None) -> ExchangeTree:
    """Compute node sums, edge availability, and unit-move costs for x.

    An up edge (node can give one unit away) exists iff x(Y) > lo_Y, a
    down edge (node can take one) iff x(Y) < hi_Y; costs are the
    one-sided marginals of the node objective.  Convexity makes every
    up/down round trip non-negative, which is asserted.
    """
    t = _topo if _topo is not None else _Topology(inst)
    m = t.m
    left, right, elem = t.left, t.right, t.elem
    lo, hi, obj = t.lo, t.hi, t.obj
    sums = [0] * m
    up_ok = [False] * m
    dn_ok = [False] * m
    w_up = [0.0] * m
    w_dn = [0.0] * m
    root = m - 1
    for v in range(m):
        l = left[v]
        s = x[elem[v]] if l < 0 else sums[l] + sums[right[v]]
        sums[v] = s
        if v == root:
            continue
        up = s > lo[v]
        dn = s < hi[v]
        if up or dn:
            f = obj[v]
            f0 = f(s)
            if up:
                up_ok[v] = True
                w_up[v] = f(s - 1) - f0
            if dn:
                dn_ok[v] = True
                w_dn[v] = f(s + 1) - f0
            if up and dn and w_up[v] + w_dn[v] < -1e-9:
                raise ConsistencyError(
                    f"node {t.ids[v]!r}: negative up/down cycle "
                    f"({w_up[v]} + {w_dn[v]}); objective is not convex"
                )
    return ExchangeTree(t, sums, up_ok, dn_ok, w_up, w_dn)


def steepest_direction_dp(tree: ExchangeTree) -> tuple[int, int, float] | None:
    """Cheapest feasible exchange (i, j, delta), or None if none exists.

    One ascending pass: for every node, track the cheapest donor path
    rising out of its subtree and the cheapest receiver path descending
    into it, then combine the two across *distinct* children at the apex.
    Witness leaves ride along, so equal-cost candidates resolve to the
    lexicographically smallest (i, j) without a backtracking pass.
    """
    t = tree.topo
    m = t.m
    left, right, elem = t.left, t.right, t.elem
    up_ok, dn_ok, w_up, w_dn = tree.up_ok, tree.dn_ok, tree.w_up, tree.w_dn

    up_c = [INF] * m
    up_w = [-1] * m
    dn_c = [INF] * m
    dn_w = [-1] * m
    best = INF
    bi = bj = -1
    for v in range(m):
        l = left[v]
        if l < 0:
            e = elem[v]
            up_c[v] = 0.0
            up_w[v] = e
            dn_c[v] = 0.0
            dn_w[v] = e
            continue
        r = right[v]
        ul = up_c[l] + w_up[l] if up_ok[l] else INF
        ur = up_c[r] + w_up[r] if up_ok[r] else INF
        dl = dn_c[l] + w_dn[l] if dn_ok[l] else INF
        dr = dn_c[r] + w_dn[r] if dn_ok[r] else INF
        # exchanges whose path peaks here must use two different children
        if ul < INF and dr < INF:
            c = ul + dr
            if c < best or (c == best and (up_w[l], dn_w[r]) < (bi, bj)):
                best, bi, bj = c, up_w[l], dn_w[r]
        if ur < INF and dl < INF:
            c = ur + dl
            if c < best or (c == best and (up_w[r], dn_w[l]) < (bi, bj)):
                best, bi, bj = c, up_w[r], dn_w[l]
        if ul < ur or (ul == ur and up_w[l] <= up_w[r]):
            up_c[v], up_w[v] = ul, up_w[l]
        else:
            up_c[v], up_w[v] = ur, up_w[r]
        if dl < dr or (dl == dr and dn_w[l] <= dn_w[r]):
            dn_c[v], dn_w[v] = dl, dn_w[l]
        else:
            dn_c[v], dn_w[v] = dr, dn_w[r]
    if best == INF:
        return None
    return bi, bj, best


class LaminarDpOracle:
    """Direction oracle that rebuilds the exchange tree each iteration (O(n))."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self._topo = _Topology(inst)

    def direction(self, x: Sequence[int]) -> tuple[int, int, float] | None:
        return steepest_direction_dp(
            build_exchange_tree(self.inst, x, _topo=self._topo)
        )

    def apply(self, i: int, j: int) -> None:
        pass


def scan_improving_pair(
    inst: Instance, x: Sequence[int], tol: float, *, _topo: _Topology | None = None
) -> tuple[int, int, float] | None:
    """Exhaustive pair scan via path sums; None if no exchange beats -tol.

    Used by debug mode at sizes where re-evaluating the full objective
    for every pair would be too slow; costs O(n^2 * depth).
    """
    tree = build_exchange_tree(inst, x, _topo=_topo)
    t = tree.topo
    parent = t.parent
    depth = [0] * t.m
    for v in range(t.m - 2, -1, -1):
        depth[v] = depth[parent[v]] + 1

    n = inst.n
    leaf_idx = t.leaf_idx
    best: tuple[int, int, float] | None = None
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a, b = leaf_idx[i], leaf_idx[j]
            cost = 0.0
            ok = True
            while depth[a] > depth[b]:
                if not tree.up_ok[a]:
                    ok = False
                    break
                cost += tree.w_up[a]
                a = parent[a]
            if ok:
                while depth[b] > depth[a]:
                    if not tree.dn_ok[b]:
                        ok = False
                        break
                    cost += tree.w_dn[b]
                    b = parent[b]
            if ok:
                while a != b:
                    if not (tree.up_ok[a] and tree.dn_ok[b]):
                        ok = False
                        break
                    cost += tree.w_up[a] + tree.w_dn[b]
                    a = parent[a]
                    b = parent[b]
            if ok and cost < -tol and (best is None or cost < best[2]):
                best = (i, j, cost)
    return best
