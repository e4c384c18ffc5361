"""Executable checks: weak solutions, consistency, invariant domains, continuity.

Every check returns a :class:`CheckReport`; nothing here raises on a failed
property. Random scans take an explicit seed and record it.
"""

import json
import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from .constrained import ConstraintProblem, solve_constrained
from .errors import LWRARZError, UnknownDomain
from .fan import RH_TOL, Kind, l1_distance, rarefaction_point, validate_fan
from .model import TAU_DOM, Phase
from .two_phase import solve_r1, solve_r2

log = logging.getLogger(__name__)

RAREFACTION_TOL = 1e-8
N_RAREFACTION = 32


@dataclass
class CheckReport:
    name: str
    passed: bool
    tolerance: float
    residual: float = 0.0
    witness: dict = field(default_factory=dict)
    seed: int = None

    def to_json(self):
        return json.dumps(asdict(self), default=_jsonable, sort_keys=True)

    def __bool__(self):
        return self.passed


def _jsonable(x):
    if hasattr(x, "as_list"):
        return x.as_list()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, Kind):
        return x.value
    return str(x)


def write_reports(reports, path):
    with open(path, "w") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")


def summarize(reports):
    failed = [r for r in reports if not r.passed]
    return {"total": len(reports), "failed": len(failed), "first_failure": failed[0] if failed else None}


# -- solver adapters -------------------------------------------------------------


def make_solver(model, name, q0=None):
    """Two-argument closure ``solve(ul, ur) -> WaveFan`` for a named solver."""
    name = name.lower()
    if name == "r1":
        return lambda ul, ur: solve_r1(model, ul, ur)
    if name == "r2":
        return lambda ul, ur: solve_r2(model, ul, ur)
    sid = {"r1c": 1, "r2c": 2}.get(name)
    if sid is None:
        raise ValueError(f"unknown solver {name!r}")
    return lambda ul, ur: solve_constrained(ConstraintProblem(model, ul, ur, q0, sid))


# -- weak solutions --------------------------------------------------------------


def rarefaction_residual(model, wave, n=N_RAREFACTION):
    """Largest ``|lambda(u(xi)) - xi|`` over ``n`` interior points of a rarefaction."""
    lo, hi = wave.speed
    if hi <= lo:
        return 0.0
    xi = lo + (hi - lo) * (np.arange(1, n + 1) / (n + 1))
    if wave.family == "free":
        rho = np.asarray(model.V.speed_inverse(xi, model.rf_hi), dtype=float)
        lam = model.lambda_f(rho)
    else:
        w = wave.left.w
        rho = np.asarray(model.p.lam1_inverse(w, xi), dtype=float)
        lam = model.lambda_1(rho, w - model.p(rho))
    return float(np.max(np.abs(lam - xi)))


def check_weak_solution(fan, rh_tol=RH_TOL, raref_tol=RAREFACTION_TOL):
    """Rankine-Hugoniot at every jump and self-similarity inside every rarefaction."""
    violations = validate_fan(fan, rh_tol)
    worst = max((v.residual for v in violations), default=0.0)
    raref = 0.0
    for k, w in enumerate(fan.waves):
        if w.is_rarefaction:
            r = rarefaction_residual(fan.model, w)
            raref = max(raref, r)
            if r > raref_tol:
                violations.append(("RarefactionSampling", k, r))
    passed = not violations
    witness = {} if passed else {"violations": [_violation_dict(v) for v in violations], "fan": fan.to_dict()}
    return CheckReport("weak_solution", passed, rh_tol, max(worst, raref), witness)


def _violation_dict(v):
    if isinstance(v, tuple):
        return {"check": v[0], "wave": v[1], "residual": v[2]}
    return asdict(v)


def check_constraint(fan, q0, tol=TAU_DOM):
    """Both traces carry at most Q0 and the flow is continuous across x = 0."""
    a, b = fan.traces()
    excess = max(a.q, b.q) - q0
    gap = abs(a.q - b.q)
    passed = excess <= tol and gap <= tol
    return CheckReport(
        "constraint",
        passed,
        tol,
        max(excess, gap, 0.0),
        {} if passed else {"traces": [a, b], "q0": q0},
    )


# -- random suite ----------------------------------------------------------------

SCENARIOS = ("ff", "cc", "fc", "cf")


def suite_q0s(model):
    """The four flow bounds of the random suite.

    ``0.5 Q(u_c(W_c))``, ``Q(u_c(W_c))``, their midrange with
    ``Q(u_c(W_max))`` and ``1.1 Q(u_c(W_max))``; the last one is clipped
    below ``q_max`` since a bound at or above the largest free flow is void.
    """
    qa, qb = model.q_uc(model.w_c), model.q_uc(model.w_max)
    return (0.5 * qa, qa, 0.5 * (qa + qb), min(1.1 * qb, 0.999 * model.q_max))


def sample_pair(model, scenario, rng):
    pick = {"f": sample_free, "c": sample_congested}
    return pick[scenario[0]](model, rng), pick[scenario[1]](model, rng)


class _Tally:
    """Running pass count and worst residual of one named check."""

    def __init__(self, name, tol, seed):
        self.report = CheckReport(name, True, tol, 0.0, {"count": 0}, seed)

    def add(self, rep, index, pair):
        r = self.report
        r.witness["count"] += 1
        r.residual = max(r.residual, rep.residual)
        if not rep.passed and r.passed:
            r.passed = False
            r.witness.update({"index": index, "ul": pair[0], "ur": pair[1], "first_failure": rep.witness})


def random_suite(model, n, seed=0, q0s=None, scenarios=SCENARIOS, solvers=("r1", "r2", "r1c", "r2c")):
    """Weak-solution, constraint and classification checks on random pairs.

    For every scenario, ``n`` pairs are drawn and solved by each solver (the
    constrained ones once per Q0). Returns one aggregated report per
    (check, scenario, solver, Q0): ``weak_solution``, ``constraint``,
    ``n2_flow`` (R2c trace flow equals Q0 on N2 pairs with Q0 at most
    ``Q(u_c(W_max))``) and ``classify`` (closed-form side agrees with the
    traces of the unconstrained fan).
    """
    from .constrained import classify

    q0s = suite_q0s(model) if q0s is None else q0s
    qb = model.q_uc(model.w_max)
    reports = []
    for scen in scenarios:
        rng = np.random.default_rng([seed, SCENARIOS.index(scen)])
        pairs = [sample_pair(model, scen, rng) for _ in range(n)]
        tallies = {}

        def tally(name, solver, q0, tol=RH_TOL):
            key = (name, solver, q0)
            if key not in tallies:
                label = f"{name}:{scen}:{solver}" + ("" if q0 is None else f":q0={q0:.6g}")
                tallies[key] = _Tally(label, tol, seed)
            return tallies[key]

        for i, pair in enumerate(pairs):
            base, base_weak = {}, {}
            for name in ("r1", "r2"):
                if name in solvers or any(s.startswith(name) for s in solvers):
                    base[name] = make_solver(model, name)(*pair)
                if name in solvers:
                    base_weak[name] = check_weak_solution(base[name])
                    tally("weak_solution", name, None).add(base_weak[name], i, pair)
            for name in solvers:
                if not name.endswith("c"):
                    continue
                sid = 1 if name == "r1c" else 2
                ua, ub = base[name[:2]].traces()
                for q0 in q0s:
                    prob = ConstraintProblem(model, pair[0], pair[1], q0, sid)
                    cls = classify(prob)
                    if cls.constrained:
                        fan, weak = solve_constrained(prob), None
                    else:
                        # C pairs reuse the unconstrained fan and its check
                        fan, weak = base[name[:2]], base_weak.get(name[:2])
                    if weak is None:
                        weak = check_weak_solution(fan)
                        if not cls.constrained:
                            base_weak[name[:2]] = weak
                    tally("weak_solution", name, q0).add(weak, i, pair)
                    tally("constraint", name, q0, TAU_DOM).add(check_constraint(fan, q0), i, pair)
                    trace_side = "C" if max(ua.q, ub.q) <= q0 + TAU_DOM else "N"
                    agree = trace_side == cls.side
                    tally("classify", name, q0, 0.0).add(
                        CheckReport("classify", agree, 0.0, 0.0, {} if agree else {"tag": cls.tag, "traces": trace_side}),
                        i,
                        pair,
                    )
                    if sid == 2 and cls.tag == "N2" and q0 <= qb:
                        a, b = fan.traces()
                        err = max(abs(a.q - q0), abs(b.q - q0))
                        tally("n2_flow", name, q0, TAU_DOM).add(
                            CheckReport("n2_flow", err <= TAU_DOM, TAU_DOM, err), i, pair
                        )
        reports.extend(t.report for t in tallies.values())
    return reports


# -- consistency -----------------------------------------------------------------


def _sample_points(fans, xbar, n_side=64, avoid=1e-9):
    pts = sorted({p for f in fans for p in f.breakpoints()} | {xbar})
    span = max((abs(p) for p in pts), default=1.0)
    lo, hi = pts[0] - 0.25 * span - 1.0, pts[-1] + 0.25 * span + 1.0
    xs = [0.5 * (a + b) for a, b in zip(pts, pts[1:])]
    xs += list(np.linspace(lo, xbar, n_side + 1, endpoint=False)[1:])
    xs += list(np.linspace(xbar, hi, n_side + 1)[1:])
    xs += [lo, hi]
    bp = np.array([p for f in fans for p in f.breakpoints()] or [np.inf])
    return [x for x in xs if np.min(np.abs(bp - x)) > avoid]


def _same(a, b, tol):
    return abs(a.rho - b.rho) <= tol and abs(a.v - b.v) <= tol


def check_consistency(solve, ul, um, ur, xbar, tol=TAU_DOM, n_side=64):
    """Test both consistency implications on one triple at the point ``xbar``.

    ``(I)``: if the fan of ``(ul, ur)`` takes the value ``um`` at ``xbar`` then
    the fans of ``(ul, um)`` and ``(um, ur)`` are its truncations. ``(II)``: if
    both of those fans take the value ``um`` at ``xbar`` then the fan of
    ``(ul, ur)`` is their juxtaposition. Vacuous premises pass.
    """
    F, A, B = solve(ul, ur), solve(ul, um), solve(um, ur)
    xs = _sample_points((F, A, B), xbar, n_side)
    witness = {"ul": ul, "um": um, "ur": ur, "xbar": xbar}
    premise_i = _same(F.evaluate(xbar), um, tol)
    premise_ii = _same(A.evaluate(xbar), um, tol) and _same(B.evaluate(xbar), um, tol)
    failed, worst = [], 0.0

    def compare(label, x, got, want):
        nonlocal worst
        d = max(abs(got.rho - want.rho), abs(got.v - want.v))
        if d > tol:
            worst = max(worst, d)
            failed.append({"property": label, "x": x, "got": got, "want": want})

    for x in xs:
        fx = ax = bx = None
        if premise_i or premise_ii:
            fx, ax, bx = F.evaluate(x), A.evaluate(x), B.evaluate(x)
        if premise_i:
            compare("I", x, ax, fx if x < xbar else um)
            compare("I", x, bx, um if x < xbar else fx)
        if premise_ii:
            compare("II", x, fx, ax if x < xbar else bx)
    witness.update({"premise_I": premise_i, "premise_II": premise_ii})
    if failed:
        witness["failures"] = failed[:4]
        witness["violated"] = sorted({f["property"] for f in failed})
    return CheckReport("consistency", not failed, tol, worst, witness)


def violated(report):
    """Set of consistency properties a report shows to fail."""
    return set(report.witness.get("violated", ()))


def fan_point(fan, rng):
    """A random location inside or near the fan, biased towards its waves."""
    bps = fan.breakpoints()
    if not bps:
        return float(rng.uniform(-1.0, 1.0))
    lo, hi = min(bps) - 0.5, max(bps) + 0.5
    if rng.random() < 0.3:
        return float(rng.choice(bps))
    return float(rng.uniform(lo, hi))


def consistency_scan(solve, sampler, n, seed=0, tol=TAU_DOM):
    """Check ``n`` triples drawn from ``sampler``.

    Most triples take ``u_m`` from the fan of ``(u_l, u_r)`` so that the first
    premise holds; one in four draws ``u_m`` independently.
    """
    rng = np.random.default_rng(seed)
    reports = []
    for i in range(n):
        ul, ur = sampler(rng), sampler(rng)
        F = solve(ul, ur)
        xbar = fan_point(F, rng)
        if i % 4 == 3:
            um = sampler(rng)
        else:
            um = F.evaluate(xbar)
        rep = check_consistency(solve, ul, um, ur, xbar, tol)
        rep.seed = seed
        rep.witness["index"] = i
        reports.append(rep)
    return reports


def premise_grid(solve, ul, um, ur, n=401):
    """Candidate points ``xbar``: a uniform grid around the three fans plus their breakpoints."""
    fans = (solve(ul, ur), solve(ul, um), solve(um, ur))
    bps = sorted({p for f in fans for p in f.breakpoints()} | {0.0})
    return [float(x) for x in np.linspace(bps[0] - 1.0, bps[-1] + 1.0, n)] + bps


def counterexample_check(solve, triple, label, xbars=None):
    """Passes when some ``xbar`` exhibits the violation ``triple.expect``.

    Without explicit ``xbars`` (or with an empty list) the points of
    :func:`premise_grid` are tried.
    """
    xs = xbars or triple.xbars or premise_grid(solve, triple.ul, triple.um, triple.ur)
    hits = [x for x in xs if triple.expect in violated(check_consistency(solve, triple.ul, triple.um, triple.ur, x))]
    return CheckReport(
        f"{triple.name}:{label}",
        bool(hits),
        TAU_DOM,
        float(len(hits)),
        {"expected_violation": triple.expect, "violating_xbar": hits[:3], "tested": len(xs)},
    )


# -- domains -----------------------------------------------------------------------


@dataclass(frozen=True)
class Domain:
    """A state set given by a membership predicate and a sampler.

    ``sample(rng)`` returns one state of the set. ``pieces`` lists the
    sub-samplers with their weights; measure-zero parts get their own piece
    so that scans hit them.
    """

    name: str
    contains: object
    pieces: tuple

    def sample(self, rng):
        weights = np.array([w for w, _ in self.pieces], dtype=float)
        k = rng.choice(len(self.pieces), p=weights / weights.sum())
        return self.pieces[k][1](rng)

    def __call__(self, rng):
        return self.sample(rng)


def sample_free(model, rng, rho_lo=0.0, rho_hi=None):
    rho_hi = model.rf_hi if rho_hi is None else rho_hi
    return model.free(rng.uniform(rho_lo, rho_hi))


def sample_congested(model, rng, accept=None, max_tries=100_000):
    """Uniform density, uniform speed, rejection onto the congested domain."""
    c = model.constants
    for _ in range(max_tries):
        rho = rng.uniform(model.rho_c_min, c.r_max)
        v = rng.uniform(0.0, model.v_c)
        w = v + float(model.p(rho))
        if c.w_c <= w <= c.w_max:
            u = model.make(rho, v, Phase.CONGESTED)
            if accept is None or accept(u):
                return u
    raise LWRARZError("rejection sampler failed to find a congested state")


def sample_on_marker(model, rng, w, q_max=None):
    """Congested state on the level ``w`` with flow at most ``q_max``."""
    v_hi = model.v_c if q_max is None else model.v_for_flow(w, min(q_max, model.q_uc(w)))
    return model.congested(w, rng.uniform(0.0, v_hi))


def _is_free(u):
    return u.is_free


def _in_box(u, w_lo, w_hi, v_lo, v_hi, tol=TAU_DOM):
    return u.is_congested and w_lo - tol <= u.w <= w_hi + tol and v_lo - tol <= u.v <= v_hi + tol


def q_level_marker(model, q0):
    """``w0`` with ``Q(u_c(w0)) = Q0``, clipped to ``[W_c, W_max]``."""
    c = model.constants
    return min(max(model.v_c + float(model.p(q0 / model.v_c)), c.w_c), c.w_max)


def domain_catalog(model, q0=None):
    """Names of the catalogued domains available for this model and Q0."""
    names = ["omega", "omega_f", "omega_c", "R1_free_band", "R1_cong_box", "R1_mixed", "R1_mixed_low"]
    if q0 is not None:
        qa, qb = model.q_uc(model.w_c), model.q_uc(model.w_max)
        names += ["D1", "D2"]
        if qa <= q0 <= qb:
            names += ["D2p", "D2pp"]
        names += ["I1c_a" if q0 < qb else "I1c_b", "I1c_c" if q0 >= qa else "I1c_d"]
        names += ["I2c_a" if q0 < qb else "I2c_b", "I2c_c" if q0 >= qa else "I2c_d"]
    return names


def make_domain(model, name, q0=None, **params):
    """Build a catalogued domain. Raises UnknownDomain for unknown names or
    when the Q0 hypothesis of the named domain fails."""
    c, tol = model.constants, TAU_DOM
    qa = model.q_uc(c.w_c)
    qb = model.q_uc(c.w_max)

    def need(cond):
        if q0 is None or not cond:
            raise UnknownDomain(f"domain {name!r} is not defined for Q0={q0!r}")

    def free_piece(lo=0.0, hi=None):
        return lambda rng: sample_free(model, rng, lo, hi)

    def cong_piece(accept=None):
        return lambda rng: sample_congested(model, rng, accept)

    if name == "omega":
        return Domain(name, lambda u: True, ((1, free_piece()), (1, cong_piece())))
    if name == "omega_f":
        return Domain(name, _is_free, ((1, free_piece()),))
    if name == "omega_c":
        return Domain(name, lambda u: u.is_congested, ((1, cong_piece()),))

    # invariant domains of R1 (parameters default to a generic interior choice)
    span_w = c.w_max - c.w_c
    if name == "R1_free_band":
        lo = params.get("rho_min", 0.2 * model.rf_hi)
        hi = params.get("rho_max", 0.8 * model.rf_hi)
        return Domain(name, lambda u: u.is_free and lo - tol <= u.rho <= hi + tol, ((1, free_piece(lo, hi)),))
    if name == "R1_cong_box":
        wl = params.get("w_min", c.w_c + 0.2 * span_w)
        wh = params.get("w_max", c.w_c + 0.7 * span_w)
        vl = params.get("v_min", 0.25 * model.v_c)
        vh = params.get("v_max", 0.75 * model.v_c)

        def box(u):
            return _in_box(u, wl, wh, vl, vh)

        return Domain(name, box, ((1, cong_piece(box)),))
    if name == "R1_mixed":
        wl = params.get("w_min", c.w_c + 0.2 * span_w)
        wh = params.get("w_max", c.w_c + 0.7 * span_w)
        vl = params.get("v_min", 0.3 * model.v_c)
        rl, rh = model.rho_f(wl), model.rho_f(wh)

        def mixed(u):
            if u.is_free:
                return rl - tol <= u.rho <= rh + tol
            return _in_box(u, wl, wh, vl, model.v_c)

        return Domain(
            name,
            mixed,
            ((1, free_piece(rl, rh)), (1, cong_piece(lambda u: _in_box(u, wl, wh, vl, model.v_c)))),
        )
    if name == "R1_mixed_low":
        rl = params.get("rho_min", 0.3 * model.rf_lo)
        wh = params.get("w_max", c.w_c + 0.6 * span_w)
        vl = params.get("v_min", 0.3 * model.v_c)
        rh = model.rho_f(wh)

        def low(u):
            if u.is_free:
                return rl - tol <= u.rho <= rh + tol
            return _in_box(u, c.w_c, wh, vl, model.v_c)

        return Domain(
            name,
            low,
            ((1, free_piece(rl, rh)), (1, cong_piece(lambda u: _in_box(u, c.w_c, wh, vl, model.v_c)))),
        )

    # domains tied to the constraint level
    if name in ("I1c_a", "I2c_a"):
        need(q0 < qb)
        v_star = model.v_for_flow(c.w_max, q0)

        def dom_a(u):
            return u.is_free or (u.q <= q0 + tol and u.v >= v_star - tol)

        return Domain(
            name,
            dom_a,
            (
                (2, free_piece()),
                (1, cong_piece(lambda u: u.q <= q0 and u.v >= v_star)),
                (1, lambda rng: _on_flow_curve(model, rng, q0, v_star)),
            ),
        )
    if name == "I1c_b":
        need(q0 >= qb)
        return Domain(
            name,
            lambda u: u.is_free or abs(u.v - model.v_c) <= tol,
            ((2, free_piece()), (1, lambda rng: model.u_c(rng.uniform(c.w_c, c.w_max)))),
        )
    if name == "I2c_b":
        need(q0 >= qb)
        top = model.u_c(c.w_max)
        return Domain(name, lambda u: u.is_free or top.close_to(u, tol), ((4, free_piece()), (1, lambda rng: top)))
    if name in ("I1c_c", "I2c_c"):
        need(q0 >= qa)
        return Domain(name, lambda u: u.is_congested, ((1, cong_piece()),))
    if name in ("I1c_d", "I2c_d"):
        need(q0 < qa)
        extra = model.free_with_flow(q0)

        def dom_d(u):
            return u.is_congested or (u.phase is Phase.FREE_LOW and abs(u.q - q0) <= tol)

        return Domain(name, dom_d, ((4, cong_piece()), (1, lambda rng: extra)))

    # consistency domains
    if name == "D1":
        need(True)
        return Domain(
            name,
            lambda u: u.q <= q0 + tol,
            ((1, free_piece(0.0, model.free_flux_inverse(q0))), (1, cong_piece(lambda u: u.q <= q0))),
        )
    if name == "D2":
        need(True)
        return Domain(name, lambda u: u.is_free and u.q <= q0 + tol, ((1, free_piece(0.0, model.free_flux_inverse(q0))),))
    if name == "D2p":
        need(qa <= q0 <= qb)
        w0 = q_level_marker(model, q0)
        return Domain(
            name,
            lambda u: u.is_congested and u.w >= w0 - tol and u.q <= q0 + tol,
            ((1, cong_piece(lambda u: u.w >= w0 and u.q <= q0)), (1, lambda rng: _on_flow_curve(model, rng, q0, 0.0, w0))),
        )
    if name == "D2pp":
        need(qa <= q0 <= qb)
        w0 = q_level_marker(model, q0)
        wbar = params.get("w_bar", c.w_c)
        if not c.w_c - tol <= wbar <= w0 + tol:
            raise UnknownDomain(f"w_bar={wbar!r} outside [W_c, w0={w0!r}]")
        return _marker_domain(model, name, wbar, q0)
    raise UnknownDomain(name)


def _on_flow_curve(model, rng, q0, v_lo, w_lo=None):
    """Congested state with flow exactly Q0 and marker in the admissible range."""
    c = model.constants
    w_lo = q_level_marker(model, q0) if w_lo is None else w_lo
    w = rng.uniform(w_lo, c.w_max)
    v = model.v_for_flow(w, q0)
    if v < v_lo:
        v = v_lo
    return model.congested(w, v)


def _marker_domain(model, name, wbar, q0):
    """``{u in Omega : W(u) = wbar, Q(u) <= Q0}``."""
    c, tol = model.constants, TAU_DOM
    pieces = [(1, lambda rng: sample_on_marker(model, rng, wbar, q0))]
    if wbar <= c.w_c + tol:
        # W is identically W_c on the lower free domain
        hi = min(model.free_flux_inverse(min(q0, model.q_max)), model.rf_lo)
        pieces.append((1, lambda rng: model.free(rng.uniform(0.0, hi) if rng.random() < 0.9 else hi)))
    uf = model.u_f(wbar)
    if uf.q <= q0:
        pieces.append((1, lambda rng: uf))

    def on_level(u):
        return abs(u.w - wbar) <= tol and u.q <= q0 + tol

    return Domain(name, on_level, tuple(pieces))


# -- invariant domains -------------------------------------------------------------


def fan_states(fan, n_interior=8):
    """Nodal states of a fan plus interior samples of each rarefaction."""
    out = list(fan.states())
    for w in fan.waves:
        if w.is_rarefaction and w.hi > w.lo:
            for t in np.arange(1, n_interior + 1) / (n_interior + 1):
                out.append(rarefaction_point(fan.model, w.family, w.left.w, w.lo + t * (w.hi - w.lo)))
    return out


def invariant_scan(model, solver, domain, n, q0=None, seed=0):
    """Every state produced from ``n`` random pairs of ``domain`` stays in ``domain``.

    ``domain`` is a catalogue name (see :func:`domain_catalog`) or a Domain.
    """
    dom = make_domain(model, domain, q0) if isinstance(domain, str) else domain
    solve = make_solver(model, solver, q0)
    rng = np.random.default_rng(seed)
    bad = []
    for i in range(n):
        ul, ur = dom.sample(rng), dom.sample(rng)
        fan = solve(ul, ur)
        for u in fan_states(fan):
            phase = model.membership(u.rho, u.v)
            u2 = model.make(u.rho, u.v, phase) if phase else None
            if u2 is None or not dom.contains(u2):
                bad.append({"index": i, "ul": ul, "ur": ur, "state": u})
                break
    return CheckReport(
        f"invariant[{solver}:{dom.name}]",
        not bad,
        TAU_DOM,
        float(len(bad)),
        {"n": n, "q0": q0, "failures": bad[:5], "count": len(bad)} if bad else {"n": n, "q0": q0},
        seed,
    )


# -- reachability ------------------------------------------------------------------


def _normalized(model, u):
    c = model.constants
    if u.is_free:
        return ("f", u.rho / model.rf_hi, 0.0)
    return ("c", u.v / model.v_c, (u.w - c.w_c) / (c.w_max - c.w_c))


def _cell(model, u, res, free_refine=1):
    piece, a, b = _normalized(model, u)
    if piece == "f":
        # free states index marker levels, which seed the congested grid
        n = res * free_refine
        return piece, min(int(a * n), n - 1), 0
    return piece, min(int(a * res), res - 1), min(int(b * res), res - 1)


def reach(model, solver, seeds, q0, generations=3, max_pairs=6000, seed=0, res=100):
    """States attained by iterating the solver on pairs of previously reached states.

    Reached states are binned on a ``res`` grid; one representative per cell
    is kept for the next generation.
    """
    solve = make_solver(model, solver, q0)
    rng = np.random.default_rng(seed)
    reps = {}
    for u in seeds:
        reps.setdefault(_cell(model, u, res, 4), u)
    for _ in range(generations):
        pool = list(reps.values())
        m = len(pool)
        if m * m <= max_pairs:
            pairs = [(a, b) for a in pool for b in pool]
        else:
            idx = rng.integers(0, m, size=(max_pairs, 2))
            pairs = [(pool[i], pool[j]) for i, j in idx]
        for a, b in pairs:
            for u in fan_states(solve(a, b), n_interior=4):
                phase = model.membership(u.rho, u.v)
                if phase is not None:
                    reps.setdefault(_cell(model, u, res, 4), model.make(u.rho, u.v, phase))
    return list(reps.values())


def coverage(model, reached, targets, res=100, slack=1):
    """Targets lacking a reached state within ``slack`` grid cells."""
    have = {}
    for u in reached:
        piece, i, j = _cell(model, u, res)
        have.setdefault(piece, set()).add((i, j))
    missing = []
    for t in targets:
        piece, i, j = _cell(model, t, res)
        cells = have.get(piece, set())
        if not any((i + di, j + dj) in cells for di in range(-slack, slack + 1) for dj in range(-slack, slack + 1)):
            missing.append(t)
    return missing


def _grid_targets(model, name, q0, res):
    """Grid of states filling the claimed-minimal set of a catalogue domain."""
    c = model.constants
    dom = make_domain(model, name, q0)
    out = []
    if name in ("I1c_a", "I1c_b"):
        out += [model.free(r) for r in np.linspace(0.0, model.rf_hi, res)]
    if name == "I1c_b":
        out += [model.u_c(w) for w in np.linspace(c.w_c, c.w_max, res)]
        return out
    if name == "I1c_d":
        out.append(model.free_with_flow(q0))
    if name in ("I1c_a", "I1c_c", "I1c_d"):
        for v in (np.arange(res) + 0.5) / res * model.v_c:
            for w in c.w_c + (np.arange(res) + 0.5) / res * (c.w_max - c.w_c):
                try:
                    u = model.congested(w, v)
                except LWRARZError:
                    continue
                if model.in_congested_bounds(u, 0.0) and dom.contains(u):
                    out.append(u)
    return out


def reachability_scan(model, name, q0, res=100, generations=3, seed=0, max_pairs=20000):
    """Witness the "smallest invariant domain" claims at grid resolution ``res``."""
    c = model.constants
    if name in ("I1c_a", "I1c_b"):
        seeds = [model.free(r) for r in np.linspace(0.0, model.rf_hi, 4 * res + 1)]
    elif name in ("I1c_c", "I1c_d"):
        seeds = [
            model.congested(w, v)
            for w in np.linspace(c.w_c, c.w_max, res // 2 + 1)
            for v in np.linspace(0.0, model.v_c, res // 2 + 1)
            if model.in_congested_bounds(model.congested(w, v), 0.0)
        ]
    else:
        raise UnknownDomain(f"no reachability claim for {name!r}")
    reached = reach(model, "r1c", seeds, q0, generations, max_pairs, seed, res)
    dom = make_domain(model, name, q0)
    outside = [u for u in reached if not dom.contains(u)]
    missing = coverage(model, reached, _grid_targets(model, name, q0, res), res)
    passed = not outside and not missing
    return CheckReport(
        f"reachability[{name}]",
        passed,
        1.0 / res,
        float(len(missing) + len(outside)),
        {"reached": len(reached), "missing": missing[:5], "n_missing": len(missing), "outside": outside[:5]},
        seed,
    )


# -- continuity --------------------------------------------------------------------


def continuity_probe(solve, ul, ur, perturb, ns, interval=(-1.0, 1.0), n_quad=10_000):
    """Distances ``d_n = ||S[u_l^n, u_r] - S[u_l, u_r]||_L1`` for ``n`` in ``ns``.

    ``perturb(n)`` returns the perturbed left state ``u_l^n``.
    """
    base = solve(ul, ur)
    return [l1_distance(solve(perturb(n), ur), base, interval, n_quad) for n in ns]


def piecewise_l1(a, b, interval):
    """Exact L1 distance between two piecewise-constant profiles.

    A profile is ``(cuts, states)`` with ``len(states) == len(cuts) + 1``.
    """

    def at(profile, x):
        cuts, states = profile
        return states[int(np.searchsorted(cuts, x, side="right"))]

    lo, hi = interval
    pts = sorted({lo, hi, *[x for x in (*a[0], *b[0]) if lo < x < hi]})
    total = 0.0
    for x0, x1 in zip(pts, pts[1:]):
        ua, ub = at(a, 0.5 * (x0 + x1)), at(b, 0.5 * (x0 + x1))
        total += (x1 - x0) * (abs(ua.rho - ub.rho) + abs(ua.v - ub.v))
    return total


def continuity_gap(model, q0, interval=(-1.0, 1.0)):
    """Closed-form L1 distance between the two limit fans of the R1c witness.

    With ``u_0`` free of flow Q0 > Q(u_c(W_c)) and ``u_r = (R_f'', V_min)``,
    ``R1c[u_0, u_r]`` is a single LWR shock. As the left density decreases to
    ``rho_0``, ``R1c[u_l^n, u_r]`` tends to ``u_0``, then the plateau
    ``u_c(W_c)`` on ``(sigma(u_0, u_c(W_c)), 0)``, then the free state
    ``u_check`` carrying the flow of ``u_c(W_c)``, then a shock into ``u_r``.
    """
    u0 = model.free_with_flow(q0)
    ur = model.free(model.rf_hi)
    uc = model.u_c(model.w_c)
    uk = model.free_with_flow(uc.q)
    s_left = (uc.q - u0.q) / (uc.rho - u0.rho)
    s_right = (ur.q - uk.q) / (ur.rho - uk.rho)
    s_base = (ur.q - u0.q) / (ur.rho - u0.rho)
    limit = ([s_left, 0.0, s_right], [u0, uc, uk, ur])
    base = ([s_base], [u0, ur])
    return piecewise_l1(limit, base, interval)
