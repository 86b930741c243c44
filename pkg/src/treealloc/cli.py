"""Command-line interface.

Subcommands: project, solve, learn, verify, gen, bench.  All consume the
JSON instance schema documented in the README and print JSON results to
stdout; exit status 0 means success (for verify: all checks passed).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

from . import __version__
from .bruteforce import brute_minimize, brute_projection, enumerate_feasible
from .errors import InfeasibleError, TreeAllocError
from .generator import (
    GeneratorConfig,
    aggregate_series,
    gen_staff_instance,
    run_experiment,
    stream_rng,
)
from .greedy import solve_instance
from .model import (
    Instance,
    evaluate_objective,
    instance_from_json,
    l1_distance,
    load_instance,
    save_instance,
)
from .predictor import OnlineL1Learner, cold_prediction
from .projection import project, round_prediction


def _load_prediction(path: str) -> list[float]:
    with open(path) as fh:
        obj = json.load(fh)
    return [float(v) for v in obj["x_hat"]]


def _emit(obj) -> None:
    print(json.dumps(obj))


def cmd_project(args) -> int:
    inst = load_instance(args.instance).binarized()
    xhat = _load_prediction(args.prediction)
    x0 = project(inst, xhat)
    _emit({"x0": x0, "l1_to_rounded": int(l1_distance(x0, round_prediction(xhat)))})
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    xhat = _load_prediction(args.prediction) if args.prediction else None
    report, _x0, _binst = solve_instance(
        inst,
        xhat,
        oracle=args.oracle,
        engine=args.engine,
        tol=args.tol,
        record_trace=args.trace is not None,
        debug=args.debug,
    )
    if args.trace is not None:
        with open(args.trace, "w") as fh:
            json.dump({"trace": [[i, j, d] for i, j, d in report.trace]}, fh)
    _emit(
        {
            "x_star": report.x,
            "objective": report.objective,
            "iterations": report.iterations,
        }
    )
    return 0


def cmd_learn(args) -> int:
    names = sorted(
        f
        for f in os.listdir(args.instances)
        if f.endswith(".json") and not f.endswith(".sol.json")
    )
    if not names:
        print(f"no instance files in {args.instances}", file=sys.stderr)
        return 2
    learner = None
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for t, name in enumerate(names, start=1):
            inst = load_instance(os.path.join(args.instances, name))
            sol_path = os.path.join(args.instances, name[: -len(".json")] + ".sol.json")
            with open(sol_path) as fh:
                xstar = [int(v) for v in json.load(fh)["x_star"]]
            if learner is None:
                learner = OnlineL1Learner(inst.n, inst.R, step=args.step_size)
            elif learner.n != inst.n or learner.R != inst.R:
                print("instances disagree on n or R", file=sys.stderr)
                return 2
            pred = learner.prediction()
            loss = float(sum(abs(a - b) for a, b in zip(pred, xstar)))
            out.write(
                json.dumps(
                    {"t": t, "prediction": [float(v) for v in pred], "l1_loss": loss}
                )
                + "\n"
            )
            learner.observe(xstar)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_verify(args) -> int:
    inst = load_instance(args.instance).binarized()
    xhat = _load_prediction(args.prediction) if args.prediction else [inst.R / inst.n] * inst.n
    failures = 0

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        if not ok:
            failures += 1
        line = f"{'PASS' if ok else 'FAIL'} {name}"
        if detail:
            line += f": {detail}"
        print(line)

    try:
        feasible = enumerate_feasible(inst)
    except TreeAllocError as e:
        print(f"cannot enumerate: {e}", file=sys.stderr)
        return 2

    target = round_prediction(xhat)
    if not feasible:
        try:
            project(inst, xhat)
            report("infeasibility-agreement", False, "projection found a point")
        except InfeasibleError:
            report("infeasibility-agreement", True, "both report an empty region")
        return 1 if failures else 0

    bm = brute_minimize(inst)
    dist, _argmins = brute_projection(inst, target)

    x0 = project(inst, xhat)
    d0 = int(l1_distance(x0, target))
    report(
        "projection-distance",
        d0 == dist,
        f"projection {d0}, brute force {dist}, x0={x0}",
    )

    rep, x0b, _ = solve_instance(inst, xhat, oracle="dp", debug=args.debug)
    report(
        "minimum-value",
        abs(rep.objective - bm.value) <= 1e-9,
        f"solver {rep.objective}, brute force {bm.value}, x={rep.x}",
    )
    if bm.unique:
        expected = int(l1_distance(bm.minimizers[0], x0b)) // 2
        report(
            "iteration-count",
            rep.iterations == expected,
            f"{rep.iterations} iterations, |x*-x0|/2 = {expected}",
        )
    err = l1_distance(xhat, rep.x)
    report(
        "warm-start-bounds",
        l1_distance(rep.x, x0b) <= 4 * err + 1e-9 and rep.iterations <= 2 * err + 1e-9,
        f"start distance {l1_distance(rep.x, x0b)}, prediction error {err}",
    )
    return 1 if failures else 0


def cmd_gen(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    cfg = GeneratorConfig(n=args.n, R=args.R, sigma=args.sigma, T=args.T, seed=args.seed)
    for t in range(1, args.T + 1):
        inst = gen_staff_instance(cfg, stream_rng(args.seed, args.sigma, 0, t))
        stem = os.path.join(args.out, f"inst_{t:04d}")
        save_instance(inst, stem + ".json")
        report, _x0, _b = solve_instance(inst)
        with open(stem + ".sol.json", "w") as fh:
            json.dump({"x_star": report.x, "objective": report.objective}, fh)
            fh.write("\n")
    print(f"wrote {args.T} instance/solution pairs to {args.out}", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    sigmas = [float(s) for s in args.sigmas.split(",") if s]
    records = run_experiment(
        n=args.n,
        R=args.R,
        sigmas=sigmas,
        T=args.T,
        runs=args.runs,
        seed=args.seed,
        debug=args.debug,
    )
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["sigma", "run", "t", "iterations_learn", "iterations_cold", "l1_loss", "objective"]
        )
        for r in records:
            w.writerow(
                [r.sigma, r.run, r.t, r.iterations_learn, r.iterations_cold, r.l1_loss, r.objective]
            )
    if args.plot_data:
        with open(args.plot_data, "w") as fh:
            json.dump(aggregate_series(records), fh)
    print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treealloc", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("project", help="L1-project a prediction onto the feasible set")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--prediction", required=True)
    sp.set_defaults(fn=cmd_project)

    sp = sub.add_parser("solve", help="solve an instance, optionally warm-started")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--prediction")
    sp.add_argument("--oracle", choices=["dp", "heap"], default="dp")
    sp.add_argument("--engine", choices=["greedy", "general"], default="greedy")
    sp.add_argument("--trace", help="write the accepted (i, j, delta) steps to this file")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--debug", action="store_true")
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("learn", help="replay instance/solution pairs through the learner")
    sp.add_argument("--instances", required=True, help="directory of *.json + *.sol.json")
    sp.add_argument("--out", help="JSONL output path (default stdout)")
    sp.add_argument("--step-size", type=float, default=None)
    sp.set_defaults(fn=cmd_learn)

    sp = sub.add_parser("verify", help="cross-check solver outputs against brute force")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--prediction")
    sp.add_argument("--debug", action="store_true")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("gen", help="write a benchmark dataset")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--R", type=int, required=True)
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--T", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("bench", help="run the learned-vs-cold benchmark")
    sp.add_argument("--n", type=int, default=32)
    sp.add_argument("--R", type=int, default=3200)
    sp.add_argument("--sigmas", default="1,5,10,20")
    sp.add_argument("--T", type=int, default=100)
    sp.add_argument("--runs", type=int, default=10)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="CSV output path")
    sp.add_argument("--plot-data", help="also write per-sigma mean/std series as JSON")
    sp.add_argument("--debug", action="store_true")
    sp.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except TreeAllocError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
