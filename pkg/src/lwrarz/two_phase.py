"""The two-phase Riemann solvers R1 and R2.

R1 glues the classical solvers together with phase transitions that conserve
both mass and the generalized momentum. R2 differs in a single situation
(free state with positive density on the left of a congested state with a
larger marker), where it jumps directly to the right state.
"""

from .classic import arz_middle, solve_arz, solve_lwr
from .fan import Kind, Wave, WaveFan
from .model import TAU_DOM, sigma


def transition(ul, ur, momentum=True):
    """Phase transition wave, or None for coincident states."""
    if ul.close_to(ur):
        return None
    return Wave(Kind.PHASE_TRANSITION, ul, ur, sigma(ul, ur), None, momentum)


def _join(model, left, *parts):
    waves = []
    for part in parts:
        if part is None:
            continue
        waves.extend(part.waves if isinstance(part, WaveFan) else (part,))
    return WaveFan(model, left, tuple(waves))


def solve_r1(model, ul, ur):
    ul, ur = model.state(ul), model.state(ur)
    if ul.is_free and ur.is_free:
        return solve_lwr(model, ul, ur)
    if ul.is_congested and ur.is_congested:
        return solve_arz(model, ul, ur)
    if ul.is_free:
        # free -> congested: jump onto the marker level of u_l, then a contact
        um = arz_middle(model, ul, ur)
        jump = transition(ul, um)
        return _join(model, ul, jump, solve_arz(model, um, ur))
    # congested -> free: reach u_c(w_l), jump to u_f(w_l), finish with LWR
    uc, uf = model.u_c(ul.w), model.u_f(ul.w)
    head = solve_arz(model, ul, uc)
    jump = transition(head.right, uf)
    tail = solve_lwr(model, uf, ur)
    return _join(model, ul, head, jump, tail)


def r2_jumps(ul, ur):
    """True when R2 replaces the R1 fan by a single jump."""
    return ul.is_free and ur.is_congested and ul.rho > TAU_DOM and ul.w < ur.w - TAU_DOM


def solve_r2(model, ul, ur):
    ul, ur = model.state(ul), model.state(ur)
    if r2_jumps(ul, ur):
        return WaveFan(model, ul, (transition(ul, ur, momentum=False),))
    return solve_r1(model, ul, ur)

