"""Bracketed scalar root finding for monotone functions."""

import math

from .errors import NoRoot

TAU_ROOT = 1e-12


def safeguarded_newton(f, df, lo, hi, tol=TAU_ROOT, maxiter=200):
    """Root of ``f`` in ``[lo, hi]`` by Newton steps kept inside a shrinking bracket.

    ``f`` must change sign on the bracket. Whenever a Newton step would leave
    the current bracket, or fails to halve it, a bisection step is taken
    instead. ``df`` may be None, in which case plain bisection is used.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise NoRoot(f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")
    # orient so that f(a) < 0 < f(b)
    if flo < 0.0:
        a, b = lo, hi
    else:
        a, b = hi, lo
    x = 0.5 * (lo + hi)
    dx_old = abs(hi - lo)
    dx = dx_old
    fx = f(x)
    for _ in range(maxiter):
        if fx == 0.0:
            return x
        if fx < 0.0:
            a = x
        else:
            b = x
        d = df(x) if df is not None else 0.0
        newton_ok = (
            d != 0.0
            and math.isfinite(d)
            and ((x - fx / d) - a) * ((x - fx / d) - b) < 0.0
            and abs(2.0 * fx) <= abs(dx_old * d)
        )
        dx_old = dx
        if newton_ok:
            dx = fx / d
            x = x - dx
        else:
            dx = 0.5 * (b - a)
            x = a + dx
        if abs(dx) < tol:
            # one more Newton polish keeps the residual at round-off level
            fx = f(x)
            if d != 0.0 and math.isfinite(d) and fx != 0.0:
                x_new = x - fx / d
                if (x_new - a) * (x_new - b) <= 0.0:
                    x = x_new
            return x
        fx = f(x)
    return x
