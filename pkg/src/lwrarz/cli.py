"""Command-line front end.

Usage::

    lwrarz solve --left 1,1.6667 --right 2,1 --q0 1 --solver r1c --out fan
    lwrarz classify --left 1,1.6667 --right 2,1 --q0 1 --solver r1c
    lwrarz verify --left 1.9,1.3667 --right 1.9,1.3667 --q0 2 --solver r2c
    lwrarz scan --which weak --solver r1c --q0 1 --samples 1000 --seed 3
    lwrarz examples --which tv1

Exit status is 0 when every check passes, 2 when a check fails and 1 for
usage or model errors. Without ``--model`` the reference model REF1 is used
(REF2 for the total-variation examples).
"""

import argparse
import json
import sys

import numpy as np

from . import instances
from .constrained import ConstraintProblem, classify, classify_by_traces
from .errors import LWRARZError
from .model import TAU_DOM, build_model
from .verification import (
    CheckReport,
    check_constraint,
    check_weak_solution,
    consistency_scan,
    continuity_gap,
    continuity_probe,
    counterexample_check,
    invariant_scan,
    make_domain,
    make_solver,
    reachability_scan,
)

SNAP = 1e-3
SOLVERS = ("r1", "r2", "r1c", "r2c")
SCANS = ("weak", "consistency", "invariant", "reachability", "classify")
# flow bounds on either side of Q(u_c(W_c)) ~ 1.803 for REF1
CONTINUITY_Q0 = (2.0, 1.5)
EXAMPLES = ("tv1", "tv2", "cons_i", "cons_ii", "r2_remark", "continuity", "all")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    ap = _Parser(prog="lwrarz", description="Two-phase LWR/ARZ Riemann solvers with a flow constraint at x=0.")
    ap.add_argument("command", choices=("solve", "classify", "verify", "scan", "examples"))
    ap.add_argument("--model", help="JSON model config (default: built-in REF1)")
    ap.add_argument("--left", help="left state as rho,v")
    ap.add_argument("--right", help="right state as rho,v")
    ap.add_argument("--q0", type=float, help="flow bound at x=0")
    ap.add_argument("--solver", choices=SOLVERS, default="r1c")
    ap.add_argument("--samples", type=int, default=None, help="CSV points for solve, pairs for scan")
    ap.add_argument("--out", help="output path (solve: prefix for .json and .csv; scan: JSON lines)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--which", help=f"scan name {SCANS} or example name {EXAMPLES}")
    ap.add_argument("--domain", help="catalogued domain for invariant/reachability/consistency scans")
    return ap


def parse_state(model, text):
    """Parse ``rho,v``; points within 1e-3 of the free curve are snapped onto it."""
    try:
        rho, v = (float(t) for t in text.split(","))
    except (AttributeError, ValueError) as exc:
        raise UsageError(f"state must be 'rho,v', got {text!r}") from exc
    phase = model.membership(rho, v)
    if phase is not None:
        return model.make(rho, v, phase)
    if -TAU_DOM <= rho <= model.rf_hi + TAU_DOM and abs(v - float(model.V(min(max(rho, 0.0), model.rf_hi)))) <= SNAP:
        return model.free(rho)
    raise UsageError(f"state ({rho!r}, {v!r}) lies outside the domain")


def _load_model(args, default=instances.REF1):
    return build_model(args.model if args.model else default)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs --{', --'.join(missing)}")


def _states(args, model):
    _need(args, "left", "right")
    return parse_state(model, args.left), parse_state(model, args.right)


def _solver_q0(args):
    if args.solver.endswith("c"):
        _need(args, "q0")
    return args.q0


def _dump(obj):
    return json.dumps(obj, sort_keys=True)


def _emit(reports, out, stream):
    lines = [r.to_json() for r in reports]
    if out:
        with open(out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line, file=stream)
    return 0 if all(r.passed for r in reports) else 2


def cmd_solve(args, model, stream):
    ul, ur = _states(args, model)
    q0 = _solver_q0(args)
    fan = make_solver(model, args.solver, q0)(ul, ur)
    doc = {"solver": args.solver, "q0": q0, **fan.to_dict()}
    if args.solver.endswith("c") and any(w.kind.value == "constraint_interface" for w in fan.waves):
        a, b = fan.traces()
        doc["traces"] = {"u_minus": a.as_list(), "u_plus": b.as_list(), "q": [a.q, b.q]}
    n = args.samples or 2001
    span = 1.25 * max(fan.max_abs_speed(), 1e-3)
    csv_text = fan.profile_csv(np.linspace(-span, span, n))
    if args.out:
        with open(args.out + ".json", "w") as fh:
            fh.write(_dump(doc) + "\n")
        with open(args.out + ".csv", "w") as fh:
            fh.write(csv_text)
    else:
        print(_dump(doc), file=stream)
    return 0


def cmd_classify(args, model, stream):
    ul, ur = _states(args, model)
    _need(args, "q0")
    sid = 1 if args.solver in ("r1", "r1c") else 2
    print(classify(ConstraintProblem(model, ul, ur, args.q0, sid)).tag, file=stream)
    return 0


def cmd_verify(args, model, stream):
    ul, ur = _states(args, model)
    q0 = _solver_q0(args)
    fan = make_solver(model, args.solver, q0)(ul, ur)
    reports = [check_weak_solution(fan)]
    if q0 is not None and args.solver.endswith("c"):
        reports.append(check_constraint(fan, q0))
    return _emit(reports, args.out, stream)


def cmd_scan(args, model, stream):
    which = args.which or "weak"
    if which not in SCANS:
        raise UsageError(f"unknown scan {which!r}; choose from {SCANS}")
    q0 = _solver_q0(args)
    n = args.samples or 1000
    rng = np.random.default_rng(args.seed)
    if which == "invariant":
        _need(args, "domain")
        return _emit([invariant_scan(model, args.solver, args.domain, n, q0, args.seed)], args.out, stream)
    if which == "reachability":
        _need(args, "domain", "q0")
        return _emit([reachability_scan(model, args.domain, args.q0, seed=args.seed)], args.out, stream)
    dom = make_domain(model, args.domain or "omega", q0)
    solve = make_solver(model, args.solver, q0)
    if which == "consistency":
        return _emit(consistency_scan(solve, dom, n, args.seed), args.out, stream)
    reports = []
    for i in range(n):
        ul, ur = dom(rng), dom(rng)
        if which == "weak":
            rep = check_weak_solution(solve(ul, ur))
            rep.name = "weak_solution"
        else:
            _need(args, "q0")
            prob = ConstraintProblem(model, ul, ur, args.q0, 1 if args.solver in ("r1", "r1c") else 2)
            tag, side = classify(prob), classify_by_traces(prob)
            rep = check_weak_solution(solve(ul, ur))
            rep.name, rep.passed = "classify", tag.side == side
            rep.witness = {"tag": tag.tag, "trace_side": side, "ul": ul, "ur": ur}
        rep.seed = args.seed
        rep.witness["index"] = i
        reports.append(rep)
    return _emit(reports, args.out, stream)


# -- built-in instances ------------------------------------------------------------


def _tv_reports(model, ex):
    out = []
    fans = {}
    for name, expected in (("r1c", ex.tv_r1c), ("r2c", ex.tv_r2c)):
        fans[name] = make_solver(model, name, ex.q0)(ex.ul, ex.ur)
        got = fans[name].tv_invariants()
        err = max(abs(g - e) for g, e in zip(got, expected))
        out.append(
            CheckReport(f"{ex.name}:{name}", err <= 1e-8, 1e-8, err, {"tv": got, "closed_form": expected})
        )
    a, b = fans["r1c"].tv_invariants(), fans["r2c"].tv_invariants()
    ok = (a[0] > b[0] and a[1] > b[1]) if ex.name == "tv1" else (a[0] < b[0] and a[1] < b[1])
    out.append(CheckReport(f"{ex.name}:ordering", ok, 0.0, 0.0, {"r1c": a, "r2c": b}))
    return out


def run_examples(which, model_cfg=None):
    """Rebuild the named instances and check them; returns a list of reports."""
    reports = []
    names = EXAMPLES[:-1] if which == "all" else (which,)
    for name in names:
        if name in ("tv1", "tv2"):
            m = build_model(model_cfg or instances.REF2)
            ex = instances.example_tv1(m) if name == "tv1" else instances.example_tv2(m)
            reports += _tv_reports(m, ex)
            continue
        m = build_model(model_cfg or instances.REF1)
        if name == "cons_i":
            t = instances.cons_counterexample_i(m, 1.0)
            for solver in ("r1c", "r2c"):
                reports.append(counterexample_check(make_solver(m, solver, 1.0), t, solver))
        elif name == "cons_ii":
            q0 = 0.5 * (m.q_uc(m.w_c) + m.q_uc(m.w_max))
            t = instances.cons_counterexample_ii(m, q0)
            for solver in ("r1c", "r2c"):
                reports.append(counterexample_check(make_solver(m, solver, q0), t, solver))
        elif name == "r2_remark":
            t = instances.r2_remark_counterexample(m)
            reports.append(counterexample_check(make_solver(m, "r2"), t, "r2"))
        elif name == "continuity":
            q_hi, q_lo = CONTINUITY_Q0 if model_cfg is None else (
                0.5 * (m.q_uc(m.w_c) + m.q_uc(m.w_max)),
                0.8 * m.q_uc(m.w_c),
            )
            for q0, expect_jump in ((q_hi, True), (q_lo, False)):
                w = instances.continuity_witness(m, q0)
                d = continuity_probe(make_solver(m, "r1c", q0), w.ul, w.ur, w.perturb(m), [10, 100, 1000, 10000])
                gap = continuity_gap(m, q0) if expect_jump else 0.0
                ok = d[-1] >= 0.9 * gap if expect_jump else d[-1] < 1e-3
                reports.append(CheckReport(f"continuity:r1c:q0={q0:.6g}", ok, 1e-3, d[-1], {"d": d, "gap": gap}))
    return reports


def cmd_examples(args, model, stream):
    which = args.which or "all"
    if which not in EXAMPLES:
        raise UsageError(f"unknown example {which!r}; choose from {EXAMPLES}")
    cfg = None
    if args.model:
        with open(args.model) as fh:
            cfg = json.load(fh)
    return _emit(run_examples(which, cfg), args.out, stream)


COMMANDS = {
    "solve": cmd_solve,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "examples": cmd_examples,
}


def run(argv=None, stream=None):
    stream = sys.stdout if stream is None else stream
    try:
        args = build_parser().parse_args(argv)
        model = None if args.command == "examples" else _load_model(args)
        return COMMANDS[args.command](args, model, stream)
    except (UsageError, LWRARZError, OSError, ValueError) as exc:
        print(f"lwrarz: error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())

