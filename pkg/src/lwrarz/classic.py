"""Classical Riemann solvers: LWR on the free domain, ARZ on the congested domain."""

from .errors import IntermediateOutsideOmegaC, OutOfFan, OutOfRange, OutsideDomain
from .fan import Kind, Wave, WaveFan, rarefaction_point
from .model import TAU_DOM, sigma

__all__ = ["sigma", "solve_lwr", "solve_arz", "rarefaction_state", "lax_curve_1", "lax_curve_2"]


def lax_curve_1(model, u0, rho):
    """Speed on the 1-Lax curve through ``u0`` at density ``rho``."""
    return u0.w - model.p(rho)


def lax_curve_2(model, u0, rho):
    return u0.v + 0.0 * rho


def _require(model, u, free):
    u = model.state(u)
    if free and not u.is_free:
        raise OutsideDomain(f"{u!r} is not a free state")
    if not free and not u.is_congested:
        raise OutsideDomain(f"{u!r} is not a congested state")
    return u


def free_wave(model, ul, ur):
    """The single LWR wave joining two free states, or None if they coincide."""
    if ul.close_to(ur):
        return None
    if ul.rho < ur.rho:
        return Wave(Kind.SHOCK, ul, ur, sigma(ul, ur), "free", momentum=False)
    lo, hi = float(model.lambda_f(ul.rho)), float(model.lambda_f(ur.rho))
    return Wave(Kind.RAREFACTION, ul, ur, (lo, hi), "free", momentum=False)


def one_wave(model, ul, um):
    """1-shock or 1-rarefaction between congested states on the same marker level."""
    if ul.close_to(um):
        return None
    if um.rho > ul.rho:
        return Wave(Kind.SHOCK, ul, um, sigma(ul, um), "1")
    lo, hi = float(model.lambda_1(ul.rho, ul.v)), float(model.lambda_1(um.rho, um.v))
    return Wave(Kind.RAREFACTION, ul, um, (lo, hi), "1")


def solve_lwr(model, ul, ur):
    """LWR Riemann solver; the flux ``rho V(rho)`` is concave, so one wave suffices."""
    ul, ur = _require(model, ul, True), _require(model, ur, True)
    w = free_wave(model, ul, ur)
    return WaveFan(model, ul, (w,) if w else ())


def arz_middle(model, ul, ur):
    """Intersection of the 1-curve through ``ul`` with the 2-curve through ``ur``."""
    try:
        um = model.congested(ul.w, ur.v)
    except OutOfRange as exc:
        raise IntermediateOutsideOmegaC(str(exc)) from exc
    if not model.in_congested_bounds(um):
        raise IntermediateOutsideOmegaC(f"intermediate state {um!r} leaves the congested domain")
    return um


def solve_arz(model, ul, ur):
    """ARZ Riemann solver: a 1-wave to ``u_m`` followed by a 2-contact at speed ``v_r``."""
    ul, ur = _require(model, ul, False), _require(model, ur, False)
    um = arz_middle(model, ul, ur)
    waves = []
    w1 = one_wave(model, ul, um)
    if w1 is not None:
        waves.append(w1)
    # a skipped 1-wave keeps u_m (within tau_dom of u_l) so the contact has v = v_r exactly
    if not um.close_to(ur):
        waves.append(Wave(Kind.CONTACT, um, ur, ur.v, "2"))
    return WaveFan(model, ul, tuple(waves))


def rarefaction_state(model, family, anchor, xi):
    """State inside a rarefaction of ``family`` ("free" or "1") at speed ``xi``.

    For the 1-family ``anchor`` fixes the marker level. Raises OutOfFan when
    no admissible state has characteristic speed ``xi``.
    """
    if family == "free":
        lo, hi = float(model.lambda_f(model.rf_hi)), float(model.lambda_f(0.0))
        if not lo - TAU_DOM <= xi <= hi + TAU_DOM:
            raise OutOfFan(f"free speed {xi!r} outside [{lo!r}, {hi!r}]")
        return rarefaction_point(model, "free", None, min(max(xi, lo), hi))
    if family != "1":
        raise OutOfFan(f"family {family!r} has no rarefactions")
    anchor = model.state(anchor)
    try:
        u = rarefaction_point(model, "1", anchor.w, xi)
    except OutOfRange as exc:
        raise OutOfFan(str(exc)) from exc
    if not model.in_congested_bounds(u):
        raise OutOfFan(f"speed {xi!r} is not attained inside the congested domain")
    return u
