"""Heap-backed steepest directions for box-constrained instances.

When every constraint beyond the total is a per-leaf box, an exchange's
cost splits into "cost of giving one unit from i" plus "cost of taking
one unit at j".  Two indexed min-heaps keep those costs; a query reads
the tops and a move re-keys only the four touched entries, so direction
finding costs O(log n) after an O(n) build.
"""

from __future__ import annotations

from typing import Sequence

from .convex import Zero
from .errors import ConsistencyError, InputError
from .extint import is_finite
from .model import Instance

INF = float("inf")


class IndexedMinHeap:
    """Array binary min-heap over elements 0..n-1 with O(log n) change-key.

    Ordering is by (key, element) so ties resolve to the smallest element.
    `pos` is the inverse of the heap array at all times.  `sifts` counts
    level moves, for complexity accounting.
    """

    __slots__ = ("keys", "heap", "pos", "sifts")

    def __init__(self, keys: Sequence[float]):
        self.keys = list(keys)
        n = len(self.keys)
        self.heap = list(range(n))
        self.pos = list(range(n))
        self.sifts = 0
        for slot in range(n // 2 - 1, -1, -1):
            self._sift_down(slot)

    def __len__(self) -> int:
        return len(self.heap)

    def _less(self, a: int, b: int) -> bool:
        ka, kb = self.keys[a], self.keys[b]
        return ka < kb or (ka == kb and a < b)

    def _sift_up(self, slot: int) -> None:
        heap, pos = self.heap, self.pos
        e = heap[slot]
        while slot > 0:
            up = (slot - 1) >> 1
            p = heap[up]
            if not self._less(e, p):
                break
            heap[slot] = p
            pos[p] = slot
            slot = up
            self.sifts += 1
        heap[slot] = e
        pos[e] = slot

    def _sift_down(self, slot: int) -> None:
        heap, pos = self.heap, self.pos
        n = len(heap)
        e = heap[slot]
        while True:
            c = 2 * slot + 1
            if c >= n:
                break
            if c + 1 < n and self._less(heap[c + 1], heap[c]):
                c += 1
            if not self._less(heap[c], e):
                break
            heap[slot] = heap[c]
            pos[heap[c]] = slot
            slot = c
            self.sifts += 1
        heap[slot] = e
        pos[e] = slot

    def min(self) -> tuple[float, int]:
        e = self.heap[0]
        return self.keys[e], e

    def second_min(self) -> tuple[float, int] | None:
        """Runner-up; it always sits in one of the root's child slots."""
        n = len(self.heap)
        if n < 2:
            return None
        e = self.heap[1]
        if n > 2 and self._less(self.heap[2], e):
            e = self.heap[2]
        return self.keys[e], e

    def change_key(self, elem: int, key: float) -> None:
        self.keys[elem] = key
        slot = self.pos[elem]
        self._sift_up(slot)
        self._sift_down(self.pos[elem])

    def check(self) -> None:
        for slot in range(1, len(self.heap)):
            if self._less(self.heap[slot], self.heap[(slot - 1) >> 1]):
                raise ConsistencyError(f"heap order violated at slot {slot}")
        for e, slot in enumerate(self.pos):
            if self.heap[slot] != e:
                raise ConsistencyError(f"position array stale for element {e}")


def is_box_instance(inst: Instance) -> bool:
    """True when every internal non-root node is unbounded and cost-free."""
    tree = inst.tree
    for nid in tree.postorder:
        nd = tree.nodes[nid]
        if not nd.children or nid == tree.root_id:
            continue
        if is_finite(nd.lo) or is_finite(nd.hi) or not isinstance(nd.objective, Zero):
            return False
    return True


class BoxHeapOracle:
    """Direction oracle for Box: two keyed heaps over the leaves.

    Keys are +inf while the corresponding move is blocked by the box;
    elements never leave the heaps.  The oracle owns a copy of x and must
    see every applied move.
    """

    def __init__(self, inst: Instance, x0: Sequence[int]):
        if not is_box_instance(inst):
            raise InputError(
                "not a box instance (a bounded or costly internal node exists); "
                "use the dp oracle instead"
            )
        tree = inst.tree
        self.n = inst.n
        leaves = [tree.nodes[tree.leaf_ids[i]] for i in range(inst.n)]
        self.lo = [nd.lo for nd in leaves]
        self.hi = [nd.hi for nd in leaves]
        self.obj = [nd.objective for nd in leaves]
        if len(x0) != inst.n:
            raise InputError(f"start has {len(x0)} entries, expected {inst.n}")
        self.x = list(x0)
        self.dec = IndexedMinHeap([self._dec_key(k) for k in range(self.n)])
        self.inc = IndexedMinHeap([self._inc_key(k) for k in range(self.n)])

    def _dec_key(self, k: int) -> float:
        xk = self.x[k]
        if xk <= self.lo[k]:
            return INF
        return self.obj[k](xk - 1) - self.obj[k](xk)

    def _inc_key(self, k: int) -> float:
        xk = self.x[k]
        if xk >= self.hi[k]:
            return INF
        return self.obj[k](xk + 1) - self.obj[k](xk)

    def direction(self, x: Sequence[int] | None = None) -> tuple[int, int, float] | None:
        dk, i = self.dec.min()
        ik, j = self.inc.min()
        if dk == INF or ik == INF:
            return None
        if i != j:
            return i, j, dk + ik
        # tops collide: swap one side for its runner-up, keep the better
        best: tuple[float, int, int] | None = None
        alt = self.inc.second_min()
        if alt is not None and alt[0] < INF:
            best = (dk + alt[0], i, alt[1])
        alt = self.dec.second_min()
        if alt is not None and alt[0] < INF:
            cand = (alt[0] + ik, alt[1], j)
            if best is None or (cand[0], cand[1], cand[2]) < best:
                best = cand
        if best is None:
            return None
        return best[1], best[2], best[0]

    def apply(self, i: int, j: int) -> None:
        if self.x[i] - 1 < self.lo[i] or self.x[j] + 1 > self.hi[j]:
            raise ConsistencyError(f"move ({i}, {j}) leaves the box")
        self.x[i] -= 1
        self.x[j] += 1
        for k in (i, j):
            self.dec.change_key(k, self._dec_key(k))
            self.inc.change_key(k, self._inc_key(k))

    def check_keys(self) -> None:
        """Debug: every key must match a from-scratch recomputation."""
        for k in range(self.n):
            if self.dec.keys[k] != self._dec_key(k):
                raise ConsistencyError(f"stale decrease key for element {k}")
            if self.inc.keys[k] != self._inc_key(k):
                raise ConsistencyError(f"stale increase key for element {k}")
        self.dec.check()
        self.inc.check()


def init_box_oracle(inst: Instance, x0: Sequence[int]) -> BoxHeapOracle:
    """Build the two-heap oracle state for a box instance (O(n))."""
    return BoxHeapOracle(inst, x0)
