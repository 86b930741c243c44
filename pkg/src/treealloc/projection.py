"""L1 projection of rounded predictions onto the feasible region.

Every subtree's distance profile is an absolute-deviation form
|s - anchor| + indicator([lo, hi]) up to an additive constant.  The form
is closed under infimal convolution (operands add component-wise) and
interval clamping, so one bottom-up pass over a binary tree builds all
profiles and one top-down pass splits the root total into an optimal
integer assignment.  Linear time overall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConsistencyError, InfeasibleError, InputError
from .extint import ExtInt, ext_add, ext_clamp, is_finite
from .model import Instance

__all__ = [
    "AbsForm",
    "make_form",
    "convolve_forms",
    "clamp_form",
    "round_prediction",
    "project",
]


@dataclass(frozen=True)
class AbsForm:
    """|s - anchor| restricted to [lo, hi], up to an additive constant."""

    lo: ExtInt
    anchor: ExtInt
    hi: ExtInt


def make_form(lo: ExtInt, anchor: ExtInt, hi: ExtInt) -> AbsForm | None:
    """Build a form, sliding the anchor into [lo, hi]; None if lo > hi."""
    if lo > hi:
        return None
    return AbsForm(lo, ext_clamp(anchor, lo, hi), hi)


def convolve_forms(a: AbsForm, b: AbsForm) -> AbsForm:
    """Infimal convolution: all three parameters add (saturating)."""
    return AbsForm(
        ext_add(a.lo, b.lo), ext_add(a.anchor, b.anchor), ext_add(a.hi, b.hi)
    )


def clamp_form(g: AbsForm, lo: ExtInt, hi: ExtInt) -> AbsForm | None:
    """Intersect the domain with [lo, hi]; None if the result is empty."""
    return make_form(max(g.lo, lo), g.anchor, min(g.hi, hi))


def round_half_away(v: float) -> int:
    """Nearest integer, halves away from zero."""
    if not math.isfinite(v):
        raise InputError(f"cannot round non-finite value {v!r}")
    m = math.floor(abs(v) + 0.5)
    return m if v >= 0 else -m


def round_prediction(xhat: Sequence[float]) -> list[int]:
    """Element-wise nearest integer, halves away from zero."""
    return [round_half_away(float(v)) for v in xhat]


def project(
    inst: Instance,
    xhat: Sequence[float],
    *,
    debug: bool = False,
    stats: dict | None = None,
) -> list[int]:
    """Feasible integer point closest in L1 to the rounded prediction.

    The instance tree must be binary (see Instance.binarized()).  When the
    feasible region is empty an InfeasibleError names the shallowest node
    whose form collapsed.  Ties in the top-down split go to the smallest
    left-child value.
    """
    tree = inst.tree
    if not tree.is_binary():
        raise InputError("project needs a binary tree; call inst.binarized() first")
    if len(xhat) != inst.n:
        raise InputError(f"prediction has {len(xhat)} entries, expected {inst.n}")
    target = round_prediction(xhat)

    forms: dict[str, AbsForm | None] = {}
    collapsed: list[str] = []
    ops = 0
    for nid in tree.postorder:
        nd = tree.nodes[nid]
        if not nd.children:
            g = make_form(nd.lo, target[nd.element], nd.hi)
            ops += 1
        else:
            a = forms[nd.children[0]]
            b = forms[nd.children[1]]
            if a is None or b is None:
                forms[nid] = None
                continue
            g = clamp_form(convolve_forms(a, b), nd.lo, nd.hi)
            ops += 2
        forms[nid] = g
        if g is None:
            collapsed.append(nid)

    if stats is not None:
        stats["form_ops"] = ops
        stats["nodes"] = len(tree.nodes)

    if forms[tree.root_id] is None:
        depths = tree.depths()
        top = min(collapsed, key=lambda nid: (depths[nid], nid))
        raise InfeasibleError(
            f"empty feasible region: bounds collapse at node {top!r}"
        )

    values: dict[str, int] = {tree.root_id: inst.R}
    for nid in reversed(tree.postorder):
        nd = tree.nodes[nid]
        if not nd.children:
            continue
        s = values[nid]
        gl = forms[nd.children[0]]
        gr = forms[nd.children[1]]
        lo = max(gl.lo, ext_add(s, -gr.hi))
        hi = min(gl.hi, ext_add(s, -gr.lo))
        t = ext_clamp(min(gl.anchor, s - gr.anchor), lo, hi)
        if debug:
            _check_split(gl, gr, s, t, lo, hi, nid)
        values[nd.children[0]] = t
        values[nd.children[1]] = s - t

    return [values[tree.leaf_ids[i]] for i in range(inst.n)]


def _check_split(gl, gr, s, t, lo, hi, nid):
    if not (lo <= t <= hi) or not isinstance(t, int):
        raise ConsistencyError(f"node {nid!r}: split value {t!r} outside [{lo}, {hi}]")
    base = abs(t - gl.anchor) + abs(s - t - gr.anchor)
    for t2 in (t - 1, t + 1):
        if lo <= t2 <= hi:
            if abs(t2 - gl.anchor) + abs(s - t2 - gr.anchor) < base:
                raise ConsistencyError(f"node {nid!r}: split {t} is not locally optimal")
