"""Exchange-greedy minimization from a feasible start.

Repeatedly asks a direction oracle for the best move x <- x - e_i + e_j
and applies it while it strictly improves.  At a local optimum the point
is a global minimizer, so the loop is the whole solver; the number of
iterations is half the L1 distance travelled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import ConsistencyError, InputError
from .model import Instance, evaluate_objective, is_feasible

DEFAULT_TOL = 1e-9


class DirectionOracle(Protocol):
    """Best-exchange provider; stateful oracles update themselves in apply()."""

    def direction(self, x: Sequence[int]) -> tuple[int, int, float] | None: ...

    def apply(self, i: int, j: int) -> None: ...


@dataclass
class SolveReport:
    x: list[int]
    iterations: int
    objective: float
    trace: list[tuple[int, int, float]] | None = None


def greedy_minimize(
    inst: Instance,
    x0: Sequence[int],
    oracle: DirectionOracle,
    *,
    tol: float = DEFAULT_TOL,
    record_trace: bool = False,
    debug: bool = False,
) -> SolveReport:
    """Run the exchange loop until no move improves by more than tol.

    tol=0 is valid for exactly-evaluated (integer) objectives.  With
    debug=True every reported delta is cross-checked against the
    objective, every intermediate point is feasibility-checked, and the
    final point is verified locally optimal by an exhaustive pair scan.
    """
    ok, nid = is_feasible(inst, x0)
    if not ok:
        raise InputError(f"infeasible start: node {nid!r} violated")
    x = list(x0)
    trace: list[tuple[int, int, float]] | None = [] if record_trace else None
    f_cur = evaluate_objective(inst, x) if debug else 0.0
    iterations = 0
    while True:
        found = oracle.direction(x)
        if found is None:
            break
        i, j, delta = found
        if not delta < -tol:
            break
        x[i] -= 1
        x[j] += 1
        if debug:
            ok, nid = is_feasible(inst, x)
            if not ok:
                raise ConsistencyError(
                    f"oracle produced infeasible move ({i}, {j}), node {nid!r} violated"
                )
            f_new = evaluate_objective(inst, x)
            if abs((f_new - f_cur) - delta) > 1e-9:
                raise ConsistencyError(
                    f"oracle delta {delta} != objective change {f_new - f_cur}"
                )
            f_cur = f_new
        oracle.apply(i, j)
        iterations += 1
        if trace is not None:
            trace.append((i, j, delta))
    if debug:
        from .descent_dp import scan_improving_pair

        bad = scan_improving_pair(inst, x, tol)
        if bad is not None:
            raise ConsistencyError(f"greedy stopped but pair {bad} still improves")
    return SolveReport(
        x=x, iterations=iterations, objective=evaluate_objective(inst, x), trace=trace
    )


def solve_instance(
    inst: Instance,
    prediction: Sequence[float] | None = None,
    *,
    oracle: str = "dp",
    engine: str = "greedy",
    tol: float = DEFAULT_TOL,
    record_trace: bool = False,
    debug: bool = False,
) -> tuple[SolveReport, list[int], Instance]:
    """Binarize, project the prediction (cold start when None), and solve.

    oracle: "dp" (any laminar tree) or "heap" (box instances only).
    engine: "greedy" uses the selected oracle; "general" is a debug path
    that scans all O(n^2) exchanges through a generic function oracle.
    Returns (report, initial point, binarized instance).
    """
    from .projection import project

    binst = inst.binarized()
    if prediction is None:
        prediction = [inst.R / inst.n] * inst.n
    x0 = project(binst, prediction, debug=debug)

    if engine == "general":
        from .mconvex import GenericDirectionOracle, laminar_mconvex

        direction = GenericDirectionOracle(laminar_mconvex(binst))
    elif engine == "greedy":
        if oracle == "dp":
            from .descent_dp import LaminarDpOracle

            direction = LaminarDpOracle(binst)
        elif oracle == "heap":
            from .descent_heap import BoxHeapOracle

            direction = BoxHeapOracle(binst, x0)
        else:
            raise InputError(f"unknown oracle {oracle!r} (expected 'dp' or 'heap')")
    else:
        raise InputError(f"unknown engine {engine!r} (expected 'greedy' or 'general')")

    report = greedy_minimize(
        binst, x0, direction, tol=tol, record_trace=record_trace, debug=debug
    )
    return report, x0, binst
