"""Point constraint ``Q(u(t, 0+-)) <= Q0`` and the constrained solvers R1c and R2c.

A pair of Riemann data is first classified: on the C side the unconstrained
solver already respects the constraint; on the N side the solution is
rebuilt from two half fans glued by a stationary interface ``u_hat | u_check``.
"""

import json
import logging
from dataclasses import dataclass

import numpy as np

from .errors import LWRARZError, NoRoot, NotInN, OutOfRange
from .fan import Kind, Wave, WaveFan
from .model import TAU_DOM, Phase, State
from .roots import TAU_ROOT
from .two_phase import solve_r1, solve_r2, transition

log = logging.getLogger(__name__)

SOLVER_IDS = (1, 2)


@dataclass(frozen=True)
class ConstraintProblem:
    model: object
    ul: State
    ur: State
    q0: float
    solver: int = 1

    def __post_init__(self):
        m = self.model
        object.__setattr__(self, "ul", m.state(self.ul))
        object.__setattr__(self, "ur", m.state(self.ur))
        if not 0.0 < self.q0 < m.q_max:
            raise OutOfRange(f"Q0={self.q0!r} must lie in (0, q_max={m.q_max!r})")
        if self.solver not in SOLVER_IDS:
            raise ValueError(f"solver id must be 1 or 2, got {self.solver!r}")


@dataclass(frozen=True)
class Classification:
    side: str
    tag: str

    @property
    def constrained(self):
        return self.side == "N"

    @property
    def family(self):
        """Subset index 1-4 shared by the C and N tags."""
        return int(self.tag[1])

    def __str__(self):
        return self.tag


@dataclass(frozen=True)
class TracePair:
    u_hat: State
    u_check: State
    case: str

    @property
    def q(self):
        return self.u_hat.q

    def to_dict(self):
        return {"u_hat": self.u_hat.as_list(), "u_check": self.u_check.as_list(), "case": self.case}

    def to_json(self):
        return json.dumps(self.to_dict())


def _kind(u):
    return "f" if u.is_free else "c"


def critical_flow(prob):
    """The flow that decides between C and N, from the closed-form inequalities."""
    m, ul, ur = prob.model, prob.ul, prob.ur
    pair = _kind(ul) + _kind(ur)
    if pair == "ff":
        return 1, ul.q
    if pair == "cc":
        return 2, m.flow_on_marker(ul.w, ur.v)
    if pair == "cf":
        return 3, m.u_f(ul.w).q
    if prob.solver == 1 or ul.w > ur.w:
        q = m.flow_on_marker(ul.w, ur.v)
        return 4, q if prob.solver == 2 else min(ul.q, q)
    return 4, min(ul.q, ur.q)


def classify(prob):
    idx, q = critical_flow(prob)
    side = "C" if q <= prob.q0 + TAU_DOM else "N"
    tag = f"{side}{idx}" if idx < 4 else f"{side}4_{prob.solver}"
    return Classification(side, tag)


def unconstrained(prob):
    return (solve_r1 if prob.solver == 1 else solve_r2)(prob.model, prob.ul, prob.ur)


def classify_by_traces(prob):
    """Classification side read off the traces of the unconstrained fan."""
    a, b = unconstrained(prob).traces()
    return "C" if max(a.q, b.q) <= prob.q0 + TAU_DOM else "N"


# -- trace selection -----------------------------------------------------------


def _on_marker(model, w, q):
    """Congested state on marker level ``w`` carrying flow ``q``."""
    v = model.v_for_flow(w, q)
    return model.congested(w, v)


def _check_side(prob, m, q0, w_hat, r_label):
    """Shared N2/N4 branch: û on level ``w_hat`` with flow Q0, ǔ behind it."""
    ur = prob.ur
    u_hat = _on_marker(m, w_hat, q0)
    if q0 >= m.flow_on_marker(m.w_c, ur.v):
        u_check = m.make(q0 / ur.v, ur.v, Phase.CONGESTED)
        if not m.in_congested_bounds(u_check):
            raise NoRoot(f"{u_check!r} left the congested domain")
        return TracePair(u_hat, u_check, f"T2{r_label}a")
    return TracePair(u_hat, m.free_with_flow(q0), f"T2{r_label}b")


def select_traces_r1c(prob):
    cls = classify(prob)
    if not cls.constrained:
        raise NotInN(f"{cls.tag} pair needs no constraint")
    m, ul, q0 = prob.model, prob.ul, prob.q0
    if cls.family in (1, 3):
        if q0 > m.q_uc(ul.w):
            u_hat = m.u_c(ul.w)
            return TracePair(u_hat, m.free_with_flow(u_hat.q), "T11a")
        return TracePair(_on_marker(m, ul.w, q0), m.free_with_flow(q0), "T11b")
    return _check_side(prob, m, q0, ul.w, "1")


def w_check_2(model, q0):
    """Marker of ``(Q0/V_c, V_c)``, the lowest level on which flow Q0 is attainable."""
    return model.v_c + float(model.p(q0 / model.v_c))


def select_traces_r2c(prob):
    cls = classify(prob)
    if not cls.constrained:
        raise NotInN(f"{cls.tag} pair needs no constraint")
    m, ul, q0 = prob.model, prob.ul, prob.q0
    w_low = max(ul.w, w_check_2(m, q0))
    if cls.family in (1, 3):
        top = m.u_c(m.w_max)
        if q0 > top.q:
            return TracePair(top, m.free_with_flow(top.q), "T12a")
        if w_low > ul.w:
            u_hat = m.make(q0 / m.v_c, m.v_c, Phase.CONGESTED)
        else:
            u_hat = _on_marker(m, ul.w, q0)
        return TracePair(u_hat, m.free_with_flow(q0), "T12b")
    # û sits on level w_l whenever Q0 is attainable there; otherwise on the
    # lowest admissible level above it
    return _check_side(prob, m, q0, w_low, "2")


# -- constrained solvers -------------------------------------------------------


def interface(u_hat, u_check):
    """Stationary jump at x = 0, or None when the traces coincide."""
    if u_hat.close_to(u_check):
        return None
    same_marker = abs(u_hat.w - u_check.w) <= TAU_ROOT
    return Wave(Kind.CONSTRAINT, u_hat, u_check, 0.0, None, momentum=same_marker)


def _glue(model, ul, left_waves, traces, right):
    waves = list(left_waves)
    jump = interface(traces.u_hat, traces.u_check)
    if jump is not None:
        waves.append(jump)
    waves.extend(right.waves)
    return WaveFan(model, ul, tuple(waves))


def solve_r1c(prob):
    m = prob.model
    if not classify(prob).constrained:
        return solve_r1(m, prob.ul, prob.ur)
    tp = select_traces_r1c(prob)
    left = solve_r1(m, prob.ul, tp.u_hat)
    right = solve_r1(m, tp.u_check, prob.ur)
    return _glue(m, prob.ul, left.waves, tp, right)


def _r2c_special(prob, tp):
    """Left part of R2c for N3 pairs with Q0 above the flow of ``u_c(w_l)``.

    Returns None when the wave speeds come out misordered, in which case the
    generic construction is used.
    """
    m, ul = prob.model, prob.ul
    uf = m.u_f(ul.w)
    head = solve_r2(m, ul, uf)
    if uf.close_to(tp.u_hat):
        return None
    jump = transition(uf, tp.u_hat, momentum=False)
    last = head.waves[-1].hi if head.waves else -np.inf
    if not last <= jump.speed < 0.0:
        log.info("R2c special branch misordered (%r, %r); using the generic fan", last, jump.speed)
        return None
    return head.waves + (jump,)


def solve_r2c(prob):
    m = prob.model
    cls = classify(prob)
    if not cls.constrained:
        return solve_r2(m, prob.ul, prob.ur)
    tp = select_traces_r2c(prob)
    left = None
    if cls.family == 3 and prob.q0 > m.q_uc(prob.ul.w):
        left = _r2c_special(prob, tp)
    if left is None:
        left = solve_r2(m, prob.ul, tp.u_hat).waves
    right = solve_r2(m, tp.u_check, prob.ur)
    return _glue(m, prob.ul, left, tp, right)


def select_traces(prob):
    return (select_traces_r1c if prob.solver == 1 else select_traces_r2c)(prob)


def solve_constrained(prob):
    return (solve_r1c if prob.solver == 1 else solve_r2c)(prob)


# -- brute-force flow maximization ---------------------------------------------


def _left_ok(model, ul, u_hat):
    a, _ = solve_r1(model, ul, u_hat).traces()
    return a.close_to(u_hat)


def _right_ok(model, u_check, ur):
    _, b = solve_r1(model, u_check, ur).traces()
    return b.close_to(u_check)


def _check_candidates(model, q, v_grid):
    out = []
    if q <= model.q_max:
        out.append(model.free_with_flow(q))
    for v in v_grid:
        if v <= 0.0:
            continue
        u = model.make(q / v, v, Phase.CONGESTED)
        if model.in_congested_bounds(u, tol=0.0):
            out.append(u)
    return out


def flow_max_oracle(prob, grid=400):
    """Largest trace flow among admissible ``(u_hat', u_check')`` pairs on a grid.

    Candidates respect the R1c conditions: ``u_hat'`` on the marker level of
    ``u_l`` with flow at most Q0, ``u_check'`` with the same flow, and each
    half fan keeps its state at the interface.
    """
    if prob.solver != 1 or not classify(prob).constrained:
        raise NotInN("the oracle is defined for N1 pairs of the first solver")
    m, ul, ur, q0 = prob.model, prob.ul, prob.ur, prob.q0
    w = ul.w
    v_hat = list(np.linspace(0.0, m.v_c, grid))
    v_check = list(np.linspace(0.0, m.v_c, grid))
    knots = [m.v_c]
    try:
        knots.append(m.v_for_flow(w, q0))
    except NoRoot:
        pass
    if 0.0 < ur.v <= m.v_c:
        knots.append(ur.v)
        v_check.append(ur.v)
    v_hat.extend(knots)
    cands = []
    for v in set(v_hat):
        try:
            u = m.congested(w, v)
        except OutOfRange:
            continue
        if u.q <= q0 + TAU_DOM and m.in_congested_bounds(u):
            cands.append(u)
    # descending flow, ties broken by the lower speed
    cands.sort(key=lambda u: (-u.q, u.v))
    for u_hat in cands:
        if not _left_ok(m, ul, u_hat):
            continue
        for u_check in _check_candidates(m, u_hat.q, v_check):
            try:
                if _right_ok(m, u_check, ur):
                    return u_hat.q
            except LWRARZError:
                continue
    return 0.0


def get_solver(name):
    """Solver callable ``f(model, ul, ur, q0=None)`` for "r1", "r2", "r1c" or "r2c"."""
    name = name.lower()
    if name == "r1":
        return lambda m, ul, ur, q0=None: solve_r1(m, ul, ur)
    if name == "r2":
        return lambda m, ul, ur, q0=None: solve_r2(m, ul, ur)
    if name in ("r1c", "r2c"):
        sid = 1 if name == "r1c" else 2

        def solve(m, ul, ur, q0):
            return solve_constrained(ConstraintProblem(m, ul, ur, q0, sid))

        return solve
    raise ValueError(f"unknown solver {name!r}")


__all__ = [
    "ConstraintProblem",
    "Classification",
    "TracePair",
    "classify",
    "classify_by_traces",
    "select_traces_r1c",
    "select_traces_r2c",
    "select_traces",
    "solve_constrained",
    "solve_r1c",
    "solve_r2c",
    "flow_max_oracle",
    "get_solver",
]
