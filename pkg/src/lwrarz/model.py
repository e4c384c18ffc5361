"""Model functions V and p, derived constants, phase domains and auxiliary curves.

A :class:`Model` is built once from a velocity law ``V`` (free phase) and a
pressure law ``p`` (congested phase) and is immutable afterwards. All the
geometric objects the Riemann solvers need (the free and congested domains,
the Lagrangian marker ``W``, the curves ``u_c`` and ``u_f``, the monotone
inverses) live here.
"""

import functools
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    EqualDensities,
    HypothesisViolation,
    InvalidThresholds,
    Lambda1SignViolation,
    ModelError,
    NoRoot,
    OutOfRange,
    OutsideDomain,
)
from .roots import safeguarded_newton

TAU_DOM = 1e-9


class Phase(str, Enum):
    FREE_LOW = "Free'"
    FREE_HIGH = "Free''"
    CONGESTED = "Congested"

    @property
    def is_free(self):
        return self is not Phase.CONGESTED


@dataclass(frozen=True, slots=True)
class State:
    """A point ``(rho, v)`` of the phase plane with its phase and marker ``w``."""

    rho: float
    v: float
    phase: Phase
    w: float

    @property
    def q(self):
        return self.rho * self.v

    @property
    def is_free(self):
        return self.phase is not Phase.CONGESTED

    @property
    def is_congested(self):
        return self.phase is Phase.CONGESTED

    def close_to(self, other, tol=TAU_DOM):
        return abs(self.rho - other.rho) <= tol and abs(self.v - other.v) <= tol

    def as_list(self):
        return [self.rho, self.v]

    def __repr__(self):
        return f"State(rho={self.rho:.12g}, v={self.v:.12g}, {self.phase.value})"


def _apply(fn, x):
    """Evaluate a law on floats or arrays, vectorizing scalar-only callables."""
    if isinstance(x, float) or np.ndim(x) == 0:
        return fn(x)
    try:
        return np.asarray(fn(x), dtype=float)
    except (TypeError, ValueError):
        return np.vectorize(fn, otypes=[float])(x)


class VelocityLaw:
    """Free-phase velocity ``V(rho)`` with its first two derivatives.

    The base class accepts arbitrary callables; inverses are computed by
    bracketed root finding. Subclasses override them with closed forms.
    """

    family = "custom"

    def __init__(self, f, d1, d2):
        self._f, self._d1, self._d2 = f, d1, d2

    def __call__(self, rho):
        return _apply(self._f, rho)

    def d1(self, rho):
        return _apply(self._d1, rho)

    def d2(self, rho):
        return _apply(self._d2, rho)

    def char_speed(self, rho):
        return self(rho) + rho * self.d1(rho)

    def flux_inverse(self, q, rho_hi):
        """Density in ``[0, rho_hi]`` with ``rho V(rho) = q``."""
        return safeguarded_newton(
            lambda r: r * self._f(r) - q, self.char_speed, 0.0, rho_hi
        )

    def speed_inverse(self, xi, rho_hi):
        """Density in ``[0, rho_hi]`` whose characteristic speed equals ``xi``."""
        if np.ndim(xi) > 0:
            return np.array([self.speed_inverse(float(x), rho_hi) for x in np.ravel(xi)]).reshape(np.shape(xi))
        return safeguarded_newton(
            lambda r: self.char_speed(r) - xi,
            lambda r: 2.0 * self._d1(r) + r * self._d2(r),
            0.0,
            rho_hi,
        )

    def to_config(self):
        raise ModelError("custom velocity laws cannot be serialized")


class AffineVelocity(VelocityLaw):
    family = "affine"

    def __init__(self, v_max, R):
        if v_max <= 0 or R <= 0:
            raise ModelError("affine velocity needs v_max > 0 and R > 0")
        self.v_max = float(v_max)
        self.R = float(R)
        super().__init__(
            lambda r: self.v_max * (1.0 - r / self.R),
            lambda r: -self.v_max / self.R + 0.0 * r,
            lambda r: 0.0 * r,
        )

    def flux_inverse(self, q, rho_hi):
        disc = max(1.0 - 4.0 * q / (self.v_max * self.R), 0.0)
        # smaller root, written to avoid cancellation for small q
        return 2.0 * q / (self.v_max * (1.0 + math.sqrt(disc)))

    def speed_inverse(self, xi, rho_hi):
        if np.ndim(xi):
            xi = np.asarray(xi, dtype=float)
        return 0.5 * self.R * (1.0 - xi / self.v_max)

    def to_config(self):
        return {"family": "affine", "v_max": self.v_max, "R": self.R}


class PressureLaw:
    """Congested-phase pressure ``p(rho)`` on ``(0, +inf)``."""

    family = "custom"

    def __init__(self, f, d1, d2):
        self._f, self._d1, self._d2 = f, d1, d2

    def __call__(self, rho):
        return _apply(self._f, rho)

    def d1(self, rho):
        return _apply(self._d1, rho)

    def d2(self, rho):
        return _apply(self._d2, rho)

    def _bracket(self, g, lo=1e-12, hi=1.0):
        # g decreasing in rho: expand hi until g(hi) < 0
        for _ in range(200):
            if g(hi) < 0.0:
                return lo, hi
            lo, hi = hi, 2.0 * hi
        raise OutOfRange("could not bracket root of pressure law")

    def inverse(self, y):
        if np.ndim(y) > 0:
            return np.array([self.inverse(float(t)) for t in np.ravel(y)]).reshape(np.shape(y))
        lo = 1e-12
        if self._f(lo) > y:
            raise OutOfRange(f"{y!r} is below the range of p")
        lo, hi = self._bracket(lambda r: y - self._f(r), lo)
        return safeguarded_newton(lambda r: self._f(r) - y, self._d1, lo, hi)

    def lam1_inverse(self, w, xi):
        """Density on the 1-curve ``v = w - p`` where ``v - rho p_rho = xi``."""
        if np.ndim(xi) > 0:
            return np.array([self.lam1_inverse(w, float(x)) for x in np.ravel(xi)]).reshape(np.shape(xi))

        def g(r):
            return w - self._f(r) - r * self._d1(r) - xi

        lo, hi = self._bracket(g)
        return safeguarded_newton(
            lambda r: -g(r), lambda r: 2.0 * self._d1(r) + r * self._d2(r), lo, hi
        )

    def to_config(self):
        raise ModelError("custom pressure laws cannot be serialized")


class PowerPressure(PressureLaw):
    family = "power"

    def __init__(self, gamma, v_ref, rho_max):
        if gamma <= 0 or v_ref <= 0 or rho_max <= 0:
            raise ModelError("power pressure needs gamma, v_ref, rho_max > 0")
        g, a, m = float(gamma), float(v_ref), float(rho_max)
        self.gamma, self.v_ref, self.rho_max = g, a, m
        super().__init__(
            lambda r: a / g * (r / m) ** g,
            lambda r: a / m * (r / m) ** (g - 1.0),
            lambda r: a * (g - 1.0) / m**2 * (r / m) ** (g - 2.0),
        )

    def inverse(self, y):
        if isinstance(y, float):
            bad = y <= 0.0
        else:
            y = np.asarray(y, dtype=float)
            bad = np.any(y <= 0.0)
        if bad:
            raise OutOfRange(f"power pressure is positive, cannot invert {y!r}")
        return self.rho_max * (self.gamma * y / self.v_ref) ** (1.0 / self.gamma)

    def lam1_inverse(self, w, xi):
        if not isinstance(xi, float):
            xi = np.asarray(xi, dtype=float)
        s = self.gamma * (w - xi) / (self.v_ref * (1.0 + self.gamma))
        if np.any(s <= 0.0):
            raise OutOfRange("speed not attained on the 1-curve")
        return self.rho_max * s ** (1.0 / self.gamma)

    def to_config(self):
        return {"family": "power", "gamma": self.gamma, "v_ref": self.v_ref, "rho_max": self.rho_max}


class LogPressure(PressureLaw):
    family = "log"

    def __init__(self, v_ref, rho_max):
        if v_ref <= 0 or rho_max <= 0:
            raise ModelError("log pressure needs v_ref, rho_max > 0")
        a, m = float(v_ref), float(rho_max)
        self.v_ref, self.rho_max = a, m
        super().__init__(
            lambda r: a * np.log(r / m),
            lambda r: a / r,
            lambda r: -a / r**2,
        )

    def inverse(self, y):
        if np.ndim(y):
            return self.rho_max * np.exp(np.asarray(y, dtype=float) / self.v_ref)
        return self.rho_max * math.exp(y / self.v_ref)

    def lam1_inverse(self, w, xi):
        if np.ndim(xi):
            return self.rho_max * np.exp((w - np.asarray(xi, dtype=float)) / self.v_ref - 1.0)
        return self.rho_max * math.exp((w - xi) / self.v_ref - 1.0)

    def to_config(self):
        return {"family": "log", "v_ref": self.v_ref, "rho_max": self.rho_max}


@dataclass(frozen=True)
class Constants:
    v_max: float
    v_min: float
    w_c: float
    w_max: float
    r_c: float
    r_max: float
    q_max: float


@dataclass(frozen=True, eq=False)
class Model:
    """Two-phase LWR/ARZ model with thresholds ``rf_lo = R_f'`` and ``rf_hi = R_f''``.

    Use :func:`build_model` to obtain a validated instance; the constructor
    only computes the derived constants.
    """

    V: VelocityLaw
    p: PressureLaw
    rf_lo: float
    rf_hi: float
    v_c: float
    n_grid: int = 512
    constants: Constants = field(init=False)
    rho_c_min: float = field(init=False)

    def __post_init__(self):
        V, p = self.V, self.p
        v_min = float(V(self.rf_hi))
        w_max = float(p(self.rf_hi)) + v_min
        w_c = float(p(self.rf_lo) + V(self.rf_lo))
        c = Constants(
            v_max=float(V(0.0)),
            v_min=v_min,
            w_c=w_c,
            w_max=w_max,
            r_c=float(p.inverse(w_c)),
            r_max=float(p.inverse(w_max)),
            q_max=self.rf_hi * v_min,
        )
        object.__setattr__(self, "constants", c)
        object.__setattr__(self, "rho_c_min", float(p.inverse(w_c - self.v_c)))
        # the solvers query the same marker levels repeatedly
        object.__setattr__(self, "_rho_f", functools.lru_cache(maxsize=4096)(self._rho_f_newton))

    # shorthand for the constants used everywhere
    @property
    def w_c(self):
        return self.constants.w_c

    @property
    def w_max(self):
        return self.constants.w_max

    @property
    def q_max(self):
        return self.constants.q_max

    def to_config(self):
        return {
            "V": self.V.to_config(),
            "p": self.p.to_config(),
            "rf_lo": self.rf_lo,
            "rf_hi": self.rf_hi,
            "v_c": self.v_c,
            "n_grid": self.n_grid,
        }

    # -- domains -----------------------------------------------------------

    def membership(self, rho, v, tol=TAU_DOM):
        """Phase of ``(rho, v)`` or None when the point is outside the domain."""
        if not (math.isfinite(rho) and math.isfinite(v)):
            return None
        if -tol <= rho <= self.rf_hi + tol and abs(v - self.V(min(max(rho, 0.0), self.rf_hi))) <= tol:
            return Phase.FREE_LOW if rho < self.rf_lo else Phase.FREE_HIGH
        c = self.constants
        if self.rf_lo - tol <= rho <= c.r_max + tol and -tol <= v <= self.v_c + tol:
            w = v + self.p(rho)
            if c.w_c - tol <= w <= c.w_max + tol:
                return Phase.CONGESTED
        return None

    def make(self, rho, v, phase):
        """State constructor for callers that already know the phase."""
        if phase is Phase.FREE_LOW:
            w = self.constants.w_c
        else:
            w = v + self.p(rho)
        return State(float(rho), float(v), phase, float(w))

    def state(self, rho, v=None):
        """Validated state; ``rho`` may also be a State or a ``(rho, v)`` pair."""
        if isinstance(rho, State):
            return rho
        if v is None:
            rho, v = rho
        rho, v = float(rho), float(v)
        phase = self.membership(rho, v)
        if phase is None:
            raise OutsideDomain(f"({rho!r}, {v!r}) lies outside the free and congested domains")
        return self.make(rho, v, phase)

    def free(self, rho):
        """Free state with density ``rho``."""
        rho = min(max(float(rho), 0.0), self.rf_hi)
        return self.make(rho, float(self.V(rho)), Phase.FREE_LOW if rho < self.rf_lo else Phase.FREE_HIGH)

    def congested(self, w, v):
        """Congested state on the marker level ``w`` with speed ``v``."""
        return State(float(self.p_inverse(w - v)), float(v), Phase.CONGESTED, float(w))

    def flow_and_marker(self, u):
        u = self.state(u)
        return u.q, u.w

    def in_congested_bounds(self, u, tol=TAU_DOM):
        c = self.constants
        return (
            self.rf_lo - tol <= u.rho <= c.r_max + tol
            and -tol <= u.v <= self.v_c + tol
            and c.w_c - tol <= u.v + self.p(u.rho) <= c.w_max + tol
        )

    # -- inverses and curves -----------------------------------------------

    def p_inverse(self, y):
        return self.p.inverse(y)

    def free_flux_inverse(self, q, tol=TAU_DOM):
        if not (-tol <= q <= self.q_max + tol):
            raise OutOfRange(f"flow {q!r} outside [0, q_max={self.q_max!r}]")
        q = min(max(q, 0.0), self.q_max)
        return min(self.V.flux_inverse(q, self.rf_hi), self.rf_hi)

    def free_with_flow(self, q):
        return self.free(self.free_flux_inverse(q))

    def _check_marker(self, w, tol=TAU_DOM):
        c = self.constants
        if not (c.w_c - tol <= w <= c.w_max + tol):
            raise OutOfRange(f"marker {w!r} outside [W_c, W_max]")
        return min(max(w, c.w_c), c.w_max)

    def u_c(self, w):
        """Congested state ``(p^-1(w - V_c), V_c)``."""
        w = self._check_marker(w)
        return self.congested(w, self.v_c)

    def rho_f(self, w):
        w = self._check_marker(w)
        if w == self.constants.w_c:
            return self.rf_lo
        if w == self.constants.w_max:
            return self.rf_hi
        return self._rho_f(w)

    def _rho_f_newton(self, w):
        V, p = self.V, self.p
        return safeguarded_newton(
            lambda r: V(r) + p(r) - w,
            lambda r: V.d1(r) + p.d1(r),
            self.rf_lo,
            self.rf_hi,
        )

    def u_f(self, w):
        """Free state in the upper free domain with marker ``w``."""
        return self.free(self.rho_f(w))

    def flow_on_marker(self, w, v):
        """Flow of the congested state with marker ``w`` and speed ``v``."""
        return v * self.p_inverse(w - v)

    def q_uc(self, w):
        return self.flow_on_marker(w, self.v_c)

    def v_for_flow(self, w, q):
        """Speed ``v`` in ``(0, V_c]`` with ``v p^-1(w - v) = q``.

        The flow is strictly increasing in ``v`` along a marker level because
        ``lambda_1 < 0`` on the congested domain.
        """
        top = self.flow_on_marker(w, self.v_c)
        if q > top + TAU_DOM or q < 0.0:
            raise NoRoot(f"flow {q!r} not attained on marker level {w!r} (max {top!r})")
        if q >= top:
            return self.v_c
        if q == 0.0:
            return 0.0
        p, pinv = self.p, self.p_inverse

        def f(v):
            return v * pinv(w - v) - q

        def df(v):
            r = pinv(w - v)
            return r - v / p.d1(r)

        return safeguarded_newton(f, df, 0.0, self.v_c)

    # -- characteristic speeds ---------------------------------------------

    def lambda_f(self, rho):
        return self.V.char_speed(rho)

    def lambda_1(self, rho, v):
        return v - rho * self.p.d1(rho)

    def char_speeds(self, u):
        u = self.state(u)
        if u.is_free:
            return (float(self.lambda_f(u.rho)),)
        return (float(self.lambda_1(u.rho, u.v)), u.v)


def sigma(ul, ur):
    """Speed of a discontinuity between ``ul`` and ``ur``."""
    if ul.rho == ur.rho:
        raise EqualDensities(f"equal densities {ul.rho!r}")
    return (ur.q - ul.q) / (ur.rho - ul.rho)


# -- construction and validation -------------------------------------------

_EPS = 1e-12


def _first(mask, grid):
    idx = np.flatnonzero(mask)
    return float(grid[idx[0]]) if idx.size else None


def _check_hypotheses(model):
    V, p, n = model.V, model.p, model.n_grid
    out = []
    r1 = np.linspace(0.0, model.rf_hi, n)
    Vr, V1, V2 = V(r1), V.d1(r1), V.d2(r1)
    for cond, bad in (
        ("V_rho <= 0", V1 > _EPS),
        ("V + rho V_rho > 0", Vr + r1 * V1 <= 0.0),
        ("2 V_rho + rho V_rhorho <= 0", 2 * V1 + r1 * V2 > _EPS),
    ):
        rho = _first(bad, r1)
        if rho is not None:
            out.append(("H1", cond, rho))
    r2 = np.linspace(model.rf_lo, model.constants.r_max, n)
    P1, P2 = p.d1(r2), p.d2(r2)
    for cond, bad in (("p_rho > 0", P1 <= 0.0), ("2 p_rho + rho p_rhorho > 0", 2 * P1 + r2 * P2 <= 0.0)):
        rho = _first(bad, r2)
        if rho is not None:
            out.append(("H2", cond, rho))
    r3 = np.linspace(model.rf_lo, model.rf_hi, n)
    for cond, bad in (
        ("V_rho + p_rho > 0", V.d1(r3) + p.d1(r3) <= 0.0),
        ("V < rho p_rho", V(r3) >= r3 * p.d1(r3)),
    ):
        rho = _first(bad, r3)
        if rho is not None:
            out.append(("H3", cond, rho))
    return out


def _check_lambda1(model):
    c, n = model.constants, model.n_grid
    rho = np.linspace(model.rho_c_min, c.r_max, n)[:, None]
    v = np.linspace(0.0, model.v_c, n)[None, :]
    w = v + model.p(rho)
    inside = (w >= c.w_c - TAU_DOM) & (w <= c.w_max + TAU_DOM)
    lam = v - rho * model.p.d1(rho)
    bad = inside & (lam >= 0.0)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise Lambda1SignViolation(
            f"lambda_1 >= 0 at rho={float(rho[i, 0]):.6g}, v={float(v[0, j]):.6g}"
        )


def _law_from_config(cfg, kind):
    fam = cfg.get("family")
    args = {k: v for k, v in cfg.items() if k != "family"}
    if kind == "V" and fam == "affine":
        return AffineVelocity(**args)
    if kind == "p" and fam == "power":
        return PowerPressure(**args)
    if kind == "p" and fam == "log":
        return LogPressure(**args)
    raise ModelError(f"unknown {kind} family {fam!r}")


def build_model(config=None, *, V=None, p=None, rf_lo=None, rf_hi=None, v_c=None, n_grid=512):
    """Build and validate a model.

    ``config`` is a dict (or a path to a JSON file) of the form::

        {"V": {"family": "affine", "v_max": 2, "R": 6},
         "p": {"family": "power", "gamma": 2, "v_ref": 1, "rho_max": 1},
         "rf_lo": 1.5, "rf_hi": 2, "v_c": 1}

    Alternatively pass law objects and thresholds as keywords. Raises
    InvalidThresholds, HypothesisViolation (listing every violated
    inequality) or Lambda1SignViolation.
    """
    if config is not None:
        if isinstance(config, (str, Path)):
            config = json.loads(Path(config).read_text())
        V = _law_from_config(config["V"], "V")
        p = _law_from_config(config["p"], "p")
        rf_lo, rf_hi, v_c = config["rf_lo"], config["rf_hi"], config["v_c"]
        n_grid = int(config.get("n_grid") or n_grid)
    if None in (V, p, rf_lo, rf_hi, v_c):
        raise ModelError("V, p, rf_lo, rf_hi and v_c are all required")
    rf_lo, rf_hi, v_c = float(rf_lo), float(rf_hi), float(v_c)
    if not 0.0 < rf_lo < rf_hi:
        raise InvalidThresholds(f"need 0 < R_f' < R_f'', got {rf_lo!r}, {rf_hi!r}")
    v_min = float(V(rf_hi))
    if v_min <= 0.0:
        raise InvalidThresholds(f"V(R_f'') = {v_min!r} must be positive")
    if not 0.0 < v_c <= v_min:
        raise InvalidThresholds(f"V_c = {v_c!r} must lie in (0, V(R_f'')] = (0, {v_min!r}]")
    try:
        model = Model(V, p, rf_lo, rf_hi, v_c, n_grid)
    except OutOfRange as exc:
        raise InvalidThresholds(f"derived constants undefined: {exc}") from exc
    violations = _check_hypotheses(model)
    if violations:
        raise HypothesisViolation(violations)
    _check_lambda1(model)
    return model
