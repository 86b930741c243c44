"""Staff-assignment benchmark: seeded instance streams and the
learned-vs-cold warm-start protocol.

Instances are complete binary trees over n tasks; every node Y carries a
reciprocal workload c_Y / x(Y) whose coefficient grows with the task
indices under Y (plus Gaussian noise scaled by sigma), a lower staffing
bound, and the trivial upper bound R.  Streams are reproducible: the RNG
for dataset position (sigma, run, t) is derived from the base seed alone,
and node draws follow a documented order (all workload draws in
level order, then all lower-bound draws in level order; infeasible bound
draws are retried).  Gaussians come from a Box-Muller transform of the
generator's uniforms, so streams are portable across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .descent_dp import LaminarDpOracle
from .errors import ConsistencyError, InfeasibleError, InputError
from .greedy import greedy_minimize
from .model import Instance, LaminarTree, Node, l1_distance
from .convex import Reciprocal
from .predictor import OnlineL1Learner, cold_prediction
from .projection import project

MAX_BOUND_RETRIES = 5


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    R: int
    sigma: float
    T: int
    seed: int
    ub_low: int = 0
    ub_high: int = 50

    def __post_init__(self):
        if self.n < 2 or self.n & (self.n - 1):
            raise InputError(f"n must be a power of two >= 2, got {self.n}")
        if self.R % self.n:
            raise InputError(f"R must be divisible by n, got R={self.R}, n={self.n}")
        if self.R < self.n:
            raise InputError(f"need R >= n, got R={self.R}, n={self.n}")
        if self.sigma < 0 or self.T < 1:
            raise InputError("need sigma >= 0 and T >= 1")


def _gauss(rng: np.random.Generator) -> float:
    # Box-Muller on the generator's uniforms; portable and seed-stable
    u1 = rng.random()
    while u1 <= 0.0:
        u1 = rng.random()
    u2 = rng.random()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def _uniform_int(rng: np.random.Generator, lo: int, hi: int) -> int:
    return min(lo + int(rng.random() * (hi - lo + 1)), hi)


def stream_rng(seed: int, sigma: float, run: int, t: int) -> np.random.Generator:
    """Independent generator for dataset position (sigma, run, t)."""
    key = (seed, int(round(sigma * 10**6)), run, t)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def gen_staff_instance(cfg: GeneratorConfig, rng: np.random.Generator) -> Instance:
    """One staff-assignment instance on a complete binary tree.

    Nodes are visited in level order from the root, children
    left-to-right; leaves hold task index blocks in order, and task i
    contributes base workload i + 1.
    """
    n, R = cfg.n, cfg.R
    levels = n.bit_length() - 1  # root height

    # level-order node descriptors: (height, block start, block size)
    order: list[tuple[int, int, int]] = []
    for h in range(levels, -1, -1):
        count = n >> h
        size = 1 << h
        for k in range(count):
            order.append((h, k * size, size))

    def node_id(h: int, start: int) -> str:
        return f"h{h}k{start >> h}" if h else f"leaf{start}"

    costs: dict[str, float] = {}
    for h, start, size in order:
        base = ((start + size) * (start + size + 1) - start * (start + 1)) // 2
        costs[node_id(h, start)] = max(base + cfg.sigma * _gauss(rng), 1.0)

    for _attempt in range(MAX_BOUND_RETRIES):
        lower: dict[str, int] = {}
        for h, start, size in order:
            nid = node_id(h, start)
            if h == levels:
                lower[nid] = R  # root is pinned to [R, R]
                continue
            ub = _uniform_int(rng, cfg.ub_low, cfg.ub_high)
            lower[nid] = min((1 << h) + ub, R * (1 << h) // n)

        nodes: list[Node] = []
        for h, start, size in order:
            nid = node_id(h, start)
            parent = None if h == levels else node_id(h + 1, (start >> (h + 1)) << (h + 1))
            nodes.append(
                Node(
                    id=nid,
                    parent=parent,
                    lo=lower[nid],
                    hi=R,
                    objective=Reciprocal(costs[nid]),
                    element=start if h == 0 else None,
                )
            )
        inst = Instance(LaminarTree(nodes), R)
        try:
            project(inst, cold_prediction(n, R))
        except InfeasibleError:
            continue
        return inst
    raise InfeasibleError(
        f"could not draw feasible bounds in {MAX_BOUND_RETRIES} attempts"
    )


@dataclass(frozen=True)
class ExperimentRecord:
    sigma: float
    run: int
    t: int
    iterations_learn: int
    iterations_cold: int
    l1_loss: float
    objective: float


def run_experiment(
    n: int,
    R: int,
    sigmas: Sequence[float],
    T: int,
    runs: int,
    seed: int,
    *,
    debug: bool = False,
    on_record: Callable[[ExperimentRecord], None] | None = None,
) -> list[ExperimentRecord]:
    """The online protocol: instances arrive one by one, both policies solve
    each, and the learner trains on the revealed optimum.

    Learn starts from the projection of the running-average prediction,
    Cold from the projection of the uniform R/n vector; both use the dp
    oracle.  With debug=True every solve asserts the per-solve
    invariants (exact step count, warm-start bounds, checked deltas).
    """
    records: list[ExperimentRecord] = []
    for sigma in sigmas:
        cfg = GeneratorConfig(n=n, R=R, sigma=sigma, T=T, seed=seed)
        for run in range(runs):
            learner = OnlineL1Learner(n, R)
            cold = cold_prediction(n, R)
            for t in range(1, T + 1):
                rng = stream_rng(seed, sigma, run, t)
                inst = gen_staff_instance(cfg, rng)
                oracle = LaminarDpOracle(inst)

                pred = learner.prediction()
                x0_learn = project(inst, pred, debug=debug)
                rep_learn = greedy_minimize(inst, x0_learn, oracle, debug=debug)
                x0_cold = project(inst, cold, debug=debug)
                rep_cold = greedy_minimize(inst, x0_cold, oracle, debug=debug)

                xstar = rep_learn.x
                loss = float(l1_distance(xstar, pred))
                if debug:
                    _check_solve(rep_learn, x0_learn, xstar, pred)
                    _check_solve(rep_cold, x0_cold, rep_cold.x, cold)
                learner.observe(xstar)

                rec = ExperimentRecord(
                    sigma=sigma,
                    run=run,
                    t=t,
                    iterations_learn=rep_learn.iterations,
                    iterations_cold=rep_cold.iterations,
                    l1_loss=loss,
                    objective=rep_learn.objective,
                )
                records.append(rec)
                if on_record is not None:
                    on_record(rec)
    return records


def _check_solve(report, x0, xstar, xhat) -> None:
    """Debug invariants: straight-line step count and the warm-start bounds."""
    travelled = l1_distance(report.x, x0)
    if travelled != 2 * report.iterations:
        raise ConsistencyError(
            f"{report.iterations} iterations but L1 distance travelled is {travelled}"
        )
    err = l1_distance(xhat, xstar)
    if l1_distance(xstar, x0) > 4 * err + 1e-9:
        raise ConsistencyError("projection start violates the 4x prediction-error bound")
    if report.iterations > 2 * err + 1e-9:
        raise ConsistencyError("iteration count violates the 2x prediction-error bound")


def aggregate_series(records: Sequence[ExperimentRecord]) -> dict:
    """Per-sigma mean/std over runs of both iteration counts, by t."""
    out: dict = {}
    sigmas = sorted({r.sigma for r in records})
    for sigma in sigmas:
        sub = [r for r in records if r.sigma == sigma]
        ts = sorted({r.t for r in sub})
        learn = np.array(
            [[r.iterations_learn for r in sub if r.t == t] for t in ts], dtype=float
        )
        coldi = np.array(
            [[r.iterations_cold for r in sub if r.t == t] for t in ts], dtype=float
        )
        out[str(sigma)] = {
            "t": ts,
            "learn_mean": learn.mean(axis=1).tolist(),
            "learn_std": learn.std(axis=1).tolist(),
            "cold_mean": coldi.mean(axis=1).tolist(),
            "cold_std": coldi.std(axis=1).tolist(),
        }
    return out
