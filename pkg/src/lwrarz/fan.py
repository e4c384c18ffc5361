"""Self-similar wave fans ``xi = x/t -> u(xi)`` and the measurements taken on them."""

import csv
import io
import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import TAU_DOM, Phase, State
from .roots import TAU_ROOT

log = logging.getLogger(__name__)

RH_TOL = 1e-9


class Kind(str, Enum):
    SHOCK = "shock"
    CONTACT = "contact"
    RAREFACTION = "rarefaction"
    PHASE_TRANSITION = "phase_transition"
    CONSTRAINT = "constraint_interface"


@dataclass(frozen=True, slots=True)
class Wave:
    """One elementary wave.

    ``speed`` is a float for discontinuities and a ``(lo, hi)`` pair for
    rarefactions. ``momentum`` tells whether the jump must also conserve the
    generalized momentum ``rho W``.
    """

    kind: Kind
    left: State
    right: State
    speed: object
    family: str = None
    momentum: bool = True

    @property
    def is_rarefaction(self):
        return self.kind is Kind.RAREFACTION

    @property
    def lo(self):
        return self.speed[0] if self.is_rarefaction else self.speed

    @property
    def hi(self):
        return self.speed[1] if self.is_rarefaction else self.speed

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "left": self.left.as_list(),
            "right": self.right.as_list(),
            "speed": list(self.speed) if self.is_rarefaction else self.speed,
            "family": self.family,
            "momentum": self.momentum,
        }


def rarefaction_rho(model, family, w, xi):
    """Density inside a rarefaction of ``family`` at similarity coordinate ``xi``.

    ``w`` is the marker carried by a 1-rarefaction (ignored for the free family).
    """
    if family == "free":
        return model.V.speed_inverse(xi, model.rf_hi)
    return model.p.lam1_inverse(w, xi)


def rarefaction_point(model, family, w, xi):
    rho = float(rarefaction_rho(model, family, w, xi))
    if family == "free":
        return model.free(rho)
    return State(rho, w - float(model.p(rho)), Phase.CONGESTED, w)


@dataclass(frozen=True, eq=False)
class WaveFan:
    model: object
    left: State
    waves: tuple = field(default_factory=tuple)

    @property
    def right(self):
        return self.waves[-1].right if self.waves else self.left

    def __len__(self):
        return len(self.waves)

    def kinds(self):
        return [w.kind for w in self.waves]

    def breakpoints(self):
        pts = []
        for w in self.waves:
            pts.append(w.lo)
            if w.is_rarefaction:
                pts.append(w.hi)
        return pts

    def max_abs_speed(self):
        return max((abs(s) for s in self.breakpoints()), default=0.0)

    def states(self):
        """Every nodal state of the fan, left to right."""
        out = [self.left]
        for w in self.waves:
            out.extend((w.left, w.right))
        return out

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, xi):
        """State at ``xi``; right-continuous at every jump."""
        cur = self.left
        for w in self.waves:
            if w.is_rarefaction:
                lo, hi = w.speed
                if xi < lo:
                    return cur
                if xi < hi:
                    return rarefaction_point(self.model, w.family, w.left.w, xi)
                cur = w.right
            else:
                if xi < w.speed:
                    return cur
                cur = w.right
        return cur

    __call__ = evaluate

    def sample(self, xi):
        """Vectorized evaluation: returns ``(rho, v, wave_id)`` arrays.

        ``wave_id`` is the index of the last wave crossed (or the rarefaction
        containing the point), -1 left of every wave.
        """
        xi = np.asarray(xi, dtype=float)
        rho = np.full(xi.shape, self.left.rho)
        v = np.full(xi.shape, self.left.v)
        wid = np.full(xi.shape, -1, dtype=int)
        for k, w in enumerate(self.waves):
            past = xi >= w.hi
            rho[past], v[past], wid[past] = w.right.rho, w.right.v, k
            if w.is_rarefaction:
                inside = (xi >= w.lo) & (xi < w.hi)
                if inside.any():
                    r = np.asarray(rarefaction_rho(self.model, w.family, w.left.w, xi[inside]), dtype=float)
                    rho[inside] = r
                    v[inside] = self.model.V(r) if w.family == "free" else w.left.w - self.model.p(r)
                    wid[inside] = k
        return rho, v, wid

    def traces(self):
        """One-sided limits ``(u(0-), u(0+))``.

        A jump of speed exactly zero separates the two traces. When zero lies
        strictly inside a rarefaction both traces are the sonic state.
        """
        left_trace = None
        cur = self.left
        for w in self.waves:
            if w.is_rarefaction:
                lo, hi = w.speed
                if lo < 0.0 < hi:
                    sonic = rarefaction_point(self.model, w.family, w.left.w, 0.0)
                    return sonic, sonic
                if lo >= 0.0:
                    break
                cur = w.right
            else:
                if w.speed > 0.0:
                    break
                if w.speed == 0.0 and left_trace is None:
                    left_trace = cur
                cur = w.right
        return (cur if left_trace is None else left_trace), cur

    def tv_invariants(self):
        """Total variation of ``v`` and of ``W`` across the fan."""
        tv_v = sum(abs(w.right.v - w.left.v) for w in self.waves)
        tv_w = sum(abs(w.right.w - w.left.w) for w in self.waves)
        return tv_v, tv_w

    # -- serialization --------------------------------------------------------

    def to_dict(self):
        return {"left": self.left.as_list(), "waves": [w.to_dict() for w in self.waves]}

    @classmethod
    def from_dict(cls, model, data):
        waves = []
        for d in data["waves"]:
            speed = tuple(d["speed"]) if d["kind"] == Kind.RAREFACTION.value else float(d["speed"])
            waves.append(
                Wave(
                    Kind(d["kind"]),
                    model.state(d["left"]),
                    model.state(d["right"]),
                    speed,
                    d.get("family"),
                    d.get("momentum", True),
                )
            )
        left = model.state(data["left"]) if "left" in data else (waves[0].left if waves else None)
        return cls(model, left, tuple(waves))

    def profile(self, xi):
        """Rows ``(xi, rho, v, q, w, phase, wave_id)`` for the sample points."""
        rho, v, wid = self.sample(xi)
        rows = []
        for x, r, s, k in zip(np.asarray(xi, dtype=float), rho, v, wid):
            phase = self.model.membership(float(r), float(s), tol=1e-8)
            u = self.model.make(float(r), float(s), phase or Phase.CONGESTED)
            rows.append((float(x), u.rho, u.v, u.q, u.w, phase.value if phase else "Outside", int(k)))
        return rows

    def profile_csv(self, xi):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["xi", "rho", "v", "q", "w", "phase", "wave_id"])
        for row in self.profile(xi):
            writer.writerow([repr(x) if isinstance(x, float) else x for x in row])
        return buf.getvalue()


def concat(model, *fans):
    """Juxtapose fans left to right, dropping constant pieces."""
    waves = []
    for f in fans:
        waves.extend(f.waves)
    return WaveFan(model, fans[0].left, tuple(waves))


def evaluate(fan, xi):
    return fan.evaluate(xi)


def traces(fan):
    return fan.traces()


def tv_invariants(fan):
    return fan.tv_invariants()


def l1_distance(a, b, interval=(-1.0, 1.0), n=10_000):
    """Midpoint-rule approximation of the integral of ``|rho_a - rho_b| + |v_a - v_b|``."""
    lo, hi = interval
    h = (hi - lo) / n
    xi = lo + h * (np.arange(n) + 0.5)
    ra, va, _ = a.sample(xi)
    rb, vb, _ = b.sample(xi)
    return float(h * np.sum(np.abs(ra - rb) + np.abs(va - vb)))


@dataclass(frozen=True)
class Violation:
    check: str
    wave: int
    detail: str
    residual: float = 0.0


def _lambda(model, family, u):
    if family == "free":
        return float(model.lambda_f(u.rho))
    return float(model.lambda_1(u.rho, u.v))


def validate_fan(fan, rh_tol=RH_TOL):
    """List every broken fan invariant; an empty list means the fan is valid."""
    model = fan.model
    out = []
    for i, u in enumerate(fan.states()):
        if model.membership(u.rho, u.v) is None:
            out.append(Violation("Domain", i // 2, f"{u!r} outside the domain"))
    prev = fan.left
    prev_hi = -np.inf
    for k, w in enumerate(fan.waves):
        if not prev.close_to(w.left):
            out.append(Violation("StateMismatch", k, f"{prev!r} != {w.left!r}"))
        if w.lo < prev_hi - TAU_DOM:
            out.append(Violation("SpeedOrder", k, f"speed {w.lo!r} after {prev_hi!r}", prev_hi - w.lo))
        prev, prev_hi = w.right, w.hi
        if w.is_rarefaction:
            lo, hi = w.speed
            if lo > hi:
                out.append(Violation("SpeedOrder", k, f"rarefaction [{lo!r}, {hi!r}] reversed", lo - hi))
            for end, u in ((lo, w.left), (hi, w.right)):
                res = abs(end - _lambda(model, w.family, u))
                if res > 10 * TAU_ROOT:
                    out.append(Violation("RarefactionEndpoint", k, f"endpoint {end!r} != lambda", res))
            continue
        if w.kind is Kind.CONSTRAINT and w.speed != 0.0:
            out.append(Violation("InterfaceSpeed", k, f"interface at speed {w.speed!r}", abs(w.speed)))
        if w.kind is Kind.CONTACT and abs(w.left.v - w.right.v) > TAU_DOM:
            out.append(Violation("ContactSpeed", k, "speed jumps across a contact", abs(w.left.v - w.right.v)))
        mass = abs(w.speed * (w.right.rho - w.left.rho) - (w.right.q - w.left.q))
        if mass > rh_tol:
            out.append(Violation("MassRH", k, f"mass residual {mass:.3e}", mass))
        if w.momentum:
            mom = abs(
                w.speed * (w.right.rho * w.right.w - w.left.rho * w.left.w)
                - (w.right.q * w.right.w - w.left.q * w.left.w)
            )
            if mom > rh_tol:
                out.append(Violation("MomentumRH", k, f"momentum residual {mom:.3e}", mom))
        else:
            log.debug("momentum check skipped for %s wave %d", w.kind.value, k)
    return out
