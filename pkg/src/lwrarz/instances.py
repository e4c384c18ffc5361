"""Reference models and the hand-built instances used by tests, demos and the CLI."""

from dataclasses import dataclass, field

from .model import build_model

REF1 = {
    "V": {"family": "affine", "v_max": 2.0, "R": 6.0},
    "p": {"family": "power", "gamma": 2.0, "v_ref": 1.0, "rho_max": 1.0},
    "rf_lo": 1.5,
    "rf_hi": 2.0,
    "v_c": 1.0,
}

REF2 = {**REF1, "v_c": 1.3}


def ref1():
    """``V = 2 - rho/3``, ``p = rho^2/2``, thresholds 1.5 and 2, ``V_c = 1``."""
    return build_model(REF1)


def ref2():
    return build_model(REF2)


@dataclass
class TVInstance:
    """Riemann data with the closed-form total variations of both constrained fans."""

    name: str
    ul: object
    ur: object
    q0: float
    tv_r1c: tuple
    tv_r2c: tuple
    hypotheses: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)


def example_tv1(model, rho_bar=1.95, q0=2.6):
    """Free data ``u_bar`` for which R1c has the larger total variation.

    ``u*`` is the free state carrying the flow of ``u_c(W(u_bar))`` and
    ``u_0`` the free state carrying Q0. The right state is taken equal to
    ``u_bar``.
    """
    c = model.constants
    u_bar = model.free(rho_bar)
    u_star = model.free_with_flow(model.q_uc(u_bar.w))
    u_0 = model.free_with_flow(q0)
    w2 = model.v_c + float(model.p(q0 / model.v_c))
    q_top = model.q_uc(c.w_max)
    hyp = {
        "Q(u_f(W_c)) < Q(u*)": model.u_f(c.w_c).q < u_star.q,
        "Q(u*) < Q0": u_star.q < q0,
        "Q0 < Q(u_bar)": q0 < u_bar.q,
        "Q(u_bar) < Q(u_c(W_max))": u_bar.q < q_top,
        "W(u_bar) - W(u*) > w2 - W(u_0)": u_bar.w - u_star.w > w2 - u_0.w,
    }
    return TVInstance(
        "tv1",
        u_bar,
        u_bar,
        q0,
        (2 * (u_star.v - model.v_c), 2 * (u_bar.w - u_star.w)),
        (2 * (u_0.v - model.v_c), 2 * (w2 - u_0.w)),
        hyp,
        {"u_star": u_star, "u_0": u_0, "w_check_2": w2},
    )


def example_tv2(model, w_l=3.1, q0=2.5):
    """Congested data at ``v = V_c`` for which R2c has the larger total variation."""
    c = model.constants
    ul = model.u_c(w_l)
    ur = model.free_with_flow(ul.q)
    uf = model.u_f(w_l)
    w2 = model.v_c + float(model.p(q0 / model.v_c))
    hyp = {
        "Q(u_f(W_c)) < Q(u_l)": model.u_f(c.w_c).q < ul.q,
        "Q(u_l) < Q0": ul.q < q0,
        "Q0 < Q(u_f(w_l))": q0 < uf.q,
        "Q(u_f(w_l)) < Q(u_c(W_max))": uf.q < model.q_uc(c.w_max),
    }
    return TVInstance(
        "tv2",
        ul,
        ur,
        q0,
        (ur.v - model.v_c, ul.w - ur.w),
        (ur.v + 2 * uf.v - 3 * model.v_c, 2 * w2 - ul.w - ur.w),
        hyp,
        {"u_f": uf, "w_check_2": w2},
    )


@dataclass
class Triple:
    name: str
    ul: object
    um: object
    ur: object
    xbars: list
    expect: str


def cons_counterexample_i(model, q0, ul=None, ur=None):
    """``u_m = u_r`` with ``q_r > Q0``: the first consistency property must fail."""
    ul = model.free(0.2 * model.rf_lo) if ul is None else model.state(ul)
    ur = model.free(model.free_flux_inverse(min(0.5 * (q0 + model.q_max), model.q_max))) if ur is None else ur
    return Triple("cons_i", ul, ur, ur, [10.0, 50.0], "I")


def cons_counterexample_ii(model, q0, w_l=None):
    """Free ``u_l, u_r`` and congested ``u_m`` with ``w_l = w_m`` and flows Q0.

    Requires ``Q(u_c(W_c)) <= Q0 <= Q(u_c(W_max))``. The second consistency
    property is expected to fail; ``xbars`` covers the whole range where the
    premise can hold.
    """
    c = model.constants
    w0 = model.v_c + float(model.p(q0 / model.v_c))
    if w_l is None:
        w_l = min(max(0.5 * (w0 + c.w_max), c.w_c), c.w_max)
    ul = model.u_f(w_l)
    um = model.congested(w_l, model.v_for_flow(w_l, q0))
    ur = model.free_with_flow(q0)
    return Triple("cons_ii", ul, um, ur, [], "II")


def r2_remark_counterexample(model, w_l=None, w_r=None, v=None):
    """``u_l`` upper free, ``u_m, u_r`` congested, ``w_l = w_m < w_r``, ``v_m = v_r``."""
    c = model.constants
    w_l = c.w_c + 0.4 * (c.w_max - c.w_c) if w_l is None else w_l
    w_r = c.w_c + 0.8 * (c.w_max - c.w_c) if w_r is None else w_r
    v = 0.5 * model.v_c if v is None else v
    ul = model.u_f(w_l)
    um = model.congested(w_l, v)
    ur = model.congested(w_r, v)
    return Triple("r2_remark", ul, um, ur, [], "II")


@dataclass
class ContinuityWitness:
    ul: object
    ur: object
    q0: float

    def perturb(self, model):
        return lambda n: model.free(self.ul.rho + 1.0 / n)


def continuity_witness(model, q0):
    """``u_0`` free with flow Q0 against ``(R_f'', V_min)``; perturbed upwards in density."""
    return ContinuityWitness(model.free_with_flow(q0), model.free(model.rf_hi), q0)
