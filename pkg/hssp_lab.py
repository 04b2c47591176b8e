#!/usr/bin/env python3
"""
hssp-lab command line: build hidden-structure instances, run the reductions
and solvers on them, and report one JSON record per experiment.

Examples
--------
    python hssp_lab.py solve hqpp --q 7 --hidden '{"u":3}'
    python hssp_lab.py vandermonde --q 7 --n 2 --d 2
    python hssp_lab.py base random --group '{"kind":"affine","q":13,"H_order":3}' --epsilon 0.0625
    python hssp_lab.py suite acceptance --quick

Exit codes: 0 success, 1 usage error or desk-scale bound, 2 promise
violation, 3 acceptance or verification failure.
"""

import argparse
import dataclasses
import json
import os
import sys
from functools import partial

import numpy as np
import pandas as pd
import pypeln as pl

import reporting
from acceptance import assert_passed, galois_suite, run_acceptance
from errors import AcceptanceFailure, DeskScaleExceeded, HsspLabError, InvalidGroup, PromiseViolation
from ff_algebra import MultiPoly, field_of_order
from group_core import FrobeniusView, FunctionGraphGroup, affine_action, group_from_descriptor, shifting_action
from oracle_kit import (
    TABULATE_LIMIT,
    ProblemInstance,
    make_grover_oracle,
    make_hpgp_oracle,
    make_hpp_oracle,
    make_hqpp_oracle,
    make_zpmzp_oracle,
    random_graph_poly,
    random_quadratic,
    scramble_labels,
)
from reduction_engine import (
    grover_hssp_recover,
    hqpp_to_hssp,
    lift_hssp_to_hsp,
    pm1_group,
    quadratic_coefficients,
    quadratic_labels,
    solve_multivariate_quadratic,
    vertex_of,
    zpmzp_to_hpgp,
)
from solver_suite import (
    GROVER_STRATEGIES,
    brute_force_hqpp,
    brute_force_hsp,
    brute_force_hssp,
    grover_query_counter,
    univariate_hpgp_solver,
)
from strong_base import (
    BaseSet,
    base_length,
    count_separators,
    deterministic_base_pm1,
    fg_complements,
    fg_point_base,
    frobenius_base,
    random_base,
    random_base_trials,
    separator_bound,
    verify_base,
)
from vandermonde import build_vandermonde, count_monomials, reduce_hpgp_multivariate, system_to_json

PATHS = ("A", "B", "both")


class LabArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# --- helpers ---------------------------------------------------------------------------

def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name}={raw!r} is not an integer") from None


def _load_json(text: str | None):
    if text is None:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidGroup(f"not valid JSON: {text!r} ({exc.msg})") from exc


def _as_point(obj):
    """JSON lists back to the nested tuples group elements and points use."""
    if isinstance(obj, list):
        return tuple(_as_point(x) for x in obj)
    return obj


def _check_cube(q: int, n: int, extra: int = 1) -> None:
    size = q ** n * extra
    if size > TABULATE_LIMIT:
        raise DeskScaleExceeded(f"oracle domain of size {size} exceeds the desk-scale bound {TABULATE_LIMIT}")


def _parallel(fn, items, jobs: int) -> list:
    """fn over items, on ``jobs`` threads when jobs > 1; results keep input order."""
    items = list(enumerate(items))
    if jobs > 1:
        stage = pl.thread.map(lambda it: (it[0], fn(it[1])), items, workers=jobs)
        return [r for _, r in sorted(stage, key=lambda r: r[0])]
    return [fn(x) for _, x in items]


def _scrambled(inst: ProblemInstance, args, seed: int) -> ProblemInstance:
    if not args.scramble:
        return inst
    return dataclasses.replace(inst, oracle=scramble_labels(inst.oracle, seed), seed=seed)


def _group(args):
    if not args.group:
        raise InvalidGroup("--group <json> is required")
    return group_from_descriptor(_load_json(args.group))


# --- verify / base / separators --------------------------------------------------------------

def cmd_verify(args) -> None:
    G = _group(args)
    reporting.banner(f"🔍 Galois-connection suite on {G.describe()}")
    report = galois_suite(G)
    reporting.emit({"verb": "verify galois", **report})
    if not report["passed"]:
        raise AcceptanceFailure(f"Galois law {report['law']!r} fails")
    reporting.status("ok", f"{report['subgroups']} subgroups, {report['closed']} closed, {report['partitions']} partitions")


def _fg_base_for_points(G: FunctionGraphGroup, points) -> BaseSet:
    return BaseSet(shifting_action(G), tuple(points), tuple(fg_complements(G)), True)


def cmd_base(args) -> None:
    G = _group(args)
    reporting.banner(f"📊 Strong base ({args.mode}) for {G.describe()}")
    record = {"verb": f"base {args.mode}", "group": G.describe()}

    if args.mode == "deterministic":
        if isinstance(G, FunctionGraphGroup):
            B = fg_point_base(G.field, G.d, G.n)
        else:
            B = deterministic_base_pm1(G)
        record.update(B.to_json(), length=len(B), verified=verify_base(B))
        reporting.emit(record)
        reporting.status("ok", f"{len(B)}-point base")
        return

    if args.mode == "verify":
        points = _load_json(args.points)
        if not points:
            raise InvalidGroup("--points <json list> is required for base verify")
        points = [_as_point(m) for m in points]
        if isinstance(G, FunctionGraphGroup):
            B = _fg_base_for_points(G, points)
        else:
            view = FrobeniusView(G)
            view.verify()
            B = frobenius_base(view, points)
        ok = verify_base(B)
        record.update(B.to_json(), length=len(B), verified=ok)
        reporting.emit(record)
        if not ok:
            raise AcceptanceFailure(f"{len(B)} points do not form a strong base")
        reporting.status("ok", "strong base")
        return

    view = FrobeniusView(G)
    view.verify()
    ell = base_length(len(view.kernel), args.epsilon)
    if args.trials > 1:
        outcomes = random_base_trials(view, args.epsilon, args.trials, args.seed)
        failures = args.trials - sum(outcomes)
        record.update(
            epsilon=args.epsilon, trials=args.trials, samples=ell,
            failures=failures, failure_rate=failures / args.trials,
        )
        reporting.emit(record)
        reporting.status("info", f"{failures}/{args.trials} random bases failed")
        return
    B = random_base(view, args.epsilon, args.seed)
    record.update(B.to_json(), epsilon=args.epsilon, samples=ell, length=len(B), verified=verify_base(B))
    reporting.emit(record)
    reporting.status("ok" if record["verified"] else "warn", f"{len(B)} distinct points from {ell} draws")


def separator_table(view: FrobeniusView, jobs: int = 1) -> pd.DataFrame:
    """Separator count for every ordered pair u != v of kernel points."""
    pairs = [(u, v) for u in view.kernel for v in view.kernel if u != v]
    counts = _parallel(lambda uv: count_separators(uv[0], uv[1], view), pairs, jobs)
    return pd.DataFrame({"u": [u for u, _ in pairs], "v": [v for _, v in pairs], "separators": counts})


def cmd_separators(args) -> None:
    G = _group(args)
    view = FrobeniusView(G)
    view.verify()
    reporting.banner(f"📊 Separator counts for {G.describe()}")
    df = separator_table(view, args.jobs)
    bound = separator_bound(view)
    K = len(view.kernel)
    grouped = df.groupby("separators").size().reset_index(name="pairs")
    reporting.table(grouped)
    for row in grouped.itertuples(index=False):
        reporting.emit({"verb": "separators", "separators": int(row.separators), "pairs": int(row.pairs)})
    lowest = int(df["separators"].min()) if not df.empty else K
    passed = lowest >= bound and 2 * lowest > K
    reporting.emit({
        "verb": "separators", "group": G.describe(), "kernel": K, "pairs": len(df),
        "min_count": lowest, "bound": bound, "passed": passed,
    })
    if not passed:
        raise AcceptanceFailure(f"minimum separator count {lowest} is below max({bound}, {K // 2 + 1})")
    reporting.status("ok", f"every pair has at least {lowest} separators (bound {bound})")


# --- solve ----------------------------------------------------------------------------------

def _solve_hqpp(args, hidden, seed):
    f = field_of_order(args.q)
    rng = np.random.default_rng(seed)
    u = int(hidden["u"]) if hidden else int(rng.integers(0, f.q))
    inst = _scrambled(make_hqpp_oracle(f, u), args, seed)
    out = {}
    if args.path in ("A", "both"):
        G = pm1_group(f)
        hsp = lift_hssp_to_hsp(hqpp_to_hssp(inst), deterministic_base_pm1(G))
        out["A"] = vertex_of(brute_force_hsp(hsp.oracle, G, FrobeniusView(G).complements))
    if args.path in ("B", "both"):
        out["B"] = brute_force_hqpp(inst.oracle, f)
    found = _agree(out)
    return {"u": found, "queries": inst.oracle.query_count, "paths": out, "correct": found == u}


def _solve_hpp2(args, hidden, seed):
    f = field_of_order(args.q)
    n = args.n or 2
    _check_cube(f.q, n)
    P = MultiPoly.from_json(hidden, f, n) if hidden else random_quadratic(f, n, np.random.default_rng(seed))
    inst = _scrambled(make_hpp_oracle(f, n, P), args, seed)
    vec, trace = solve_multivariate_quadratic(inst.oracle, f, n)
    return {
        "labels": quadratic_labels(n),
        "vector": vec,
        "trace": trace.to_json(),
        "queries": inst.oracle.query_count,
        "correct": vec == quadratic_coefficients(P, n),
    }


def _solve_hpgp(args, hidden, seed):
    f = field_of_order(args.q)
    n = args.n or 1
    d = args.d if args.d is not None else 2
    _check_cube(f.q, n, f.q)
    if hidden:
        Q = MultiPoly.from_json(hidden, f, n)
    else:
        Q = random_graph_poly(f, n, d, np.random.default_rng(seed))
    inst = _scrambled(make_hpgp_oracle(f, n, Q, d), args, seed)
    solver = partial(univariate_hpgp_solver, path=args.path)
    if n == 1:
        poly = MultiPoly.from_univariate(solver(inst.oracle, f, d))
        record = {**poly.to_json(), "solves": 1, "queries": inst.oracle.query_count}
    else:
        result = reduce_hpgp_multivariate(inst.oracle, solver, f, n, d)
        poly = result.poly
        record = result.to_json()
    record.update(path=args.path, correct=poly == inst.answer)
    return record


def _solve_grover(args, hidden, seed):
    f = field_of_order(args.q)
    c = int(hidden["c"]) if hidden else int(np.random.default_rng(seed).integers(0, f.q))
    inst = _scrambled(make_grover_oracle(f, c), args, seed)
    out = {}
    if args.path in ("A", "both"):
        G = group_from_descriptor(inst.params["group"])
        out["A"] = grover_hssp_recover(brute_force_hssp(inst.oracle, affine_action(G)))
    queries = inst.oracle.query_count
    if args.path in ("B", "both"):
        out["B"], queries = grover_query_counter(inst.oracle, args.strategy, seed)
    found = _agree(out)
    return {"c": found, "queries": queries, "paths": out, "correct": found == c}


def _jordan_block(m: int) -> list[list[int]]:
    return [[int(i == j or j == i + 1) for j in range(m)] for i in range(m)]


def _solve_zpmzp(args, hidden, seed):
    p, m = args.p, args.m or 2
    A = _load_json(args.A) or _jordan_block(m)
    _check_cube(p, m, p)
    if hidden:
        inst = make_zpmzp_oracle(p, m, A, hidden["v"], hidden.get("y0"))
    else:
        rng = np.random.default_rng(seed)
        inst = None
        for _ in range(64):
            v = [int(x) for x in rng.integers(0, p, size=m)]
            y0 = [int(x) for x in rng.integers(0, p, size=m)]
            try:
                inst = make_zpmzp_oracle(p, m, A, v, y0)
                break
            except InvalidGroup:
                continue
        if inst is None:
            inst = make_zpmzp_oracle(p, m, A, [0] * m)
    G = group_from_descriptor(inst.params["group"])
    inst = _scrambled(inst, args, seed)
    sol = zpmzp_to_hpgp(inst.oracle, G)
    return {**sol.to_json(), "correct": tuple(sol.v) == tuple(inst.answer)}


SOLVERS = {
    "hqpp": _solve_hqpp,
    "hpp2": _solve_hpp2,
    "hpgp": _solve_hpgp,
    "grover": _solve_grover,
    "zpmzp": _solve_zpmzp,
}


def _agree(out: dict):
    values = set(out.values())
    if len(values) != 1:
        raise PromiseViolation(f"solution paths disagree: {out}")
    return values.pop()


def cmd_solve(args) -> None:
    if args.problem in ("hqpp", "hpp2", "hpgp", "grover") and args.q is None:
        raise InvalidGroup(f"solve {args.problem} needs --q")
    if args.problem == "zpmzp" and args.p is None:
        raise InvalidGroup("solve zpmzp needs --p")
    hidden = _load_json(args.hidden)
    solver = SOLVERS[args.problem]
    seeds = np.random.SeedSequence(args.seed).generate_state(args.trials).tolist()
    reporting.banner(f"🔍 solve {args.problem}: {args.trials} trial(s), seed {args.seed}")

    def trial(i):
        return {"verb": f"solve {args.problem}", "trial": i, "seed": seeds[i], **solver(args, hidden, seeds[i])}

    records = _parallel(trial, range(args.trials), args.jobs)
    for record in records:
        reporting.emit(record)
    wrong = [r["trial"] for r in records if not r["correct"]]
    if wrong:
        raise AcceptanceFailure(f"trials {wrong} recovered a wrong answer")
    reporting.status("ok", f"{len(records)} trial(s) recovered the hidden object")


# --- vandermonde / bench / suite ------------------------------------------------------------

def cmd_vandermonde(args) -> None:
    reporting.banner(f"📊 Generalized Vandermonde system q={args.q} n={args.n} d={args.d}")
    count, branch = count_monomials(args.q, args.n, args.d)
    system = build_vandermonde(args.q, args.n, args.d)
    record = {"verb": "vandermonde", **system_to_json(system), "n": args.n, "size": system.size, "count_branch": branch}
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(system_to_json(system), fh, sort_keys=True)
        record["emit"] = args.emit
        reporting.status("file", f"Saved system to {args.emit}")
    reporting.emit(record)
    reporting.status("ok", f"{count}x{count} matrix, rank {record['rank']}")


def cmd_bench(args) -> None:
    f = field_of_order(args.q)
    strategies = [args.strategy] if args.strategy else list(GROVER_STRATEGIES)
    reporting.banner(f"📊 Classical search query counts over F_{f.q}")
    runs = []
    for strategy in strategies:
        for c in f.elements():
            _, used = grover_query_counter(make_grover_oracle(f, c).oracle, strategy, args.seed + c)
            runs.append({"strategy": strategy, "c": c, "queries": used})
    df = pd.DataFrame(runs)
    summary = df.groupby("strategy", sort=False)["queries"].agg(["mean", "min", "max"]).reset_index()
    reporting.table(summary)
    for row in summary.itertuples(index=False):
        reporting.emit({
            "verb": "bench grover", "q": f.q, "strategy": row.strategy,
            "mean": float(row.mean), "min": int(row.min), "max": int(row.max),
            "scan_mean": (f.q + 1) / 2,
        })


def cmd_suite(args) -> None:
    reporting.banner(f"🚀 Acceptance battery ({'quick' if args.quick else 'full'}), seed {args.seed}")
    results = run_acceptance(quick=args.quick, seed=args.seed, jobs=args.jobs)
    for r in results:
        reporting.emit({"verb": "suite acceptance", **r})
        reporting.status("ok" if r["passed"] else "fail", f"{r['criterion']} ({r['seconds']}s)")
    assert_passed(results)


# --- argument parsing -------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, top: bool) -> None:
    """Flags accepted before or after the verb; the leaf copies never override the top-level ones."""
    kw = {} if top else {"default": argparse.SUPPRESS}
    p.add_argument("--seed", type=int, help="Seed for every randomized step (default: $HSSP_LAB_SEED or 0)",
                   **({"default": _env_int("HSSP_LAB_SEED", 0)} if top else kw))
    p.add_argument("--jobs", type=int, help="Parallel trials (default: $HSSP_LAB_JOBS or 1)",
                   **({"default": _env_int("HSSP_LAB_JOBS", 1)} if top else kw))
    p.add_argument("--quiet", action="store_true", help="No progress on stderr", **kw)
    p.add_argument("--pretty", action="store_true", help="Print records as a table instead of JSON lines", **kw)


def build_parser() -> argparse.ArgumentParser:
    parser = LabArgumentParser(prog="hssp_lab", description="Hidden symmetry subgroup experiments at desk scale.")
    _add_common(parser, top=True)
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("verify", help="Galois-connection property suite")
    p.add_argument("what", choices=["galois"])
    p.add_argument("--group", help="Group descriptor JSON")
    _add_common(p, top=False)
    p.set_defaults(func=cmd_verify)

    p = verbs.add_parser("base", help="Build or check a strong base")
    p.add_argument("mode", choices=["random", "deterministic", "verify"])
    p.add_argument("--group", help="Group descriptor JSON")
    p.add_argument("--epsilon", type=float, default=0.25, help="Failure probability for random bases (default: 0.25)")
    p.add_argument("--trials", type=int, default=1, help="Independent random bases to draw (default: 1)")
    p.add_argument("--points", help="JSON list of base points for base verify")
    _add_common(p, top=False)
    p.set_defaults(func=cmd_base)

    p = verbs.add_parser("separators", help="Separator-count table for every kernel pair")
    p.add_argument("--group", help="Group descriptor JSON")
    _add_common(p, top=False)
    p.set_defaults(func=cmd_separators)

    p = verbs.add_parser("solve", help="Build an instance and solve it")
    p.add_argument("problem", choices=sorted(SOLVERS))
    p.add_argument("--q", type=int, help="Field order")
    p.add_argument("--n", type=int, help="Number of variables")
    p.add_argument("--d", type=int, help="Degree bound (hpgp)")
    p.add_argument("--p", type=int, help="Prime for zpmzp")
    p.add_argument("--m", type=int, help="Dimension for zpmzp (default: 2)")
    p.add_argument("--A", help="Matrix JSON for zpmzp (default: Jordan block)")
    p.add_argument("--hidden", help="Hidden object JSON; drawn from --seed when absent")
    p.add_argument("--path", choices=PATHS, default="B", help="A: through the HSP reduction, B: direct (default: B)")
    p.add_argument("--strategy", choices=GROVER_STRATEGIES, default="scan", help="Scan order for grover path B")
    p.add_argument("--trials", type=int, default=1, help="Independent trials (default: 1)")
    p.add_argument("--scramble", action="store_true", help="Relabel oracle outputs with a seeded injection")
    _add_common(p, top=False)
    p.set_defaults(func=cmd_solve)

    p = verbs.add_parser("vandermonde", help="Build a generalized Vandermonde system")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--emit", help="Write the system JSON to this file")
    _add_common(p, top=False)
    p.set_defaults(func=cmd_vandermonde)

    p = verbs.add_parser("bench", help="Query-count tables")
    p.add_argument("what", choices=["grover"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--strategy", choices=GROVER_STRATEGIES, help="Only this scan order")
    _add_common(p, top=False)
    p.set_defaults(func=cmd_bench)

    p = verbs.add_parser("suite", help="Acceptance battery")
    p.add_argument("what", choices=["acceptance"])
    p.add_argument("--quick", action="store_true", help="Shrunken grids")
    _add_common(p, top=False)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except ValueError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return 1
    args = parser.parse_args(argv)
    reporting.configure(quiet=args.quiet, pretty=args.pretty)
    if args.jobs < 1 or getattr(args, "trials", 1) < 1:
        reporting.status("fail", "--jobs and --trials must be at least 1")
        return 1
    try:
        args.func(args)
    except HsspLabError as exc:
        reporting.flush()
        reporting.status("fail", f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except ValueError as exc:
        reporting.flush()
        reporting.status("fail", str(exc))
        return 1
    reporting.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
