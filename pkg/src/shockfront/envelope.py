"""
Counterclockwise envelope of sonic shock tangents.

Through a point at distance ``r > c_u`` from the upstream velocity ``v_u``
there are two straight shocks with downstream pseudo-Mach number one.  The
one whose normal is rotated counterclockwise from ``z_u`` defines a direction
field; in polar coordinates about ``v_u`` its integral curves satisfy

    dr/dphi = -f(r),    f(r) = r tan(beta_sonic(r))

Shocks with ``L_d < 1`` have ``|dr/dphi| < f`` and therefore stay outside
the envelope once they are on or outside it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CircleDomainError, ParameterRangeError, UnsupportedBranch
from .gas import GasModel
from .vec import cross, dot, norm, polar_angle, unit, vec

# the envelope is considered to have reached the circle below this gap
CIRCLE_GAP = 1e-9
EVENT_TOL = 1e-12


class Termination(str, enum.Enum):
    HIT_WALL_A = "HitWallA"
    HIT_WALL_B = "HitWallB"
    AT_CIRCLE = "AtCircle"
    MAX_ANGLE = "MaxAngle"

    def __str__(self):
        return self.value


# simultaneous events (within EVENT_TOL in phi) resolve in this order
_PRIORITY = {Termination.HIT_WALL_A: 0, Termination.HIT_WALL_B: 1,
             Termination.AT_CIRCLE: 2, Termination.MAX_ANGLE: 3}


@dataclass(frozen=True)
class HalfLine:
    """Ray ``origin + s * direction`` for ``s >= 0``."""

    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", vec(self.origin))
        object.__setattr__(self, "direction", unit(self.direction))

    def side(self, p) -> float:
        """Signed distance of ``p`` from the supporting line (left positive)."""
        return cross(self.direction, vec(p) - self.origin)

    def along(self, p) -> float:
        return dot(vec(p) - self.origin, self.direction)


@dataclass
class EnvelopeCurve:
    center: np.ndarray
    c_u: float
    phi: np.ndarray
    r: np.ndarray
    slope: np.ndarray
    termination: Termination
    end_point: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.phi.tolist(), self.r.tolist()))

    def cartesian(self) -> np.ndarray:
        return np.column_stack([self.center[0] + self.r * np.cos(self.phi),
                                self.center[1] + self.r * np.sin(self.phi)])

    def r_at(self, phi):
        """Cubic Hermite interpolation using the ODE slopes at the nodes."""
        phi = np.asarray(phi, dtype=float)
        if len(self.phi) == 1:
            return np.full_like(phi, self.r[0])
        k = np.clip(np.searchsorted(self.phi, phi, side="right") - 1, 0, len(self.phi) - 2)
        h = self.phi[k + 1] - self.phi[k]
        s = (phi - self.phi[k]) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        return (h00 * self.r[k] + h10 * h * self.slope[k]
                + h01 * self.r[k + 1] + h11 * h * self.slope[k + 1])


def _sonic_slope_explicit(gamma: float, x: float) -> float:
    """``f(r)/r`` from the closed form, ``x = r/c_u``.

    Written with log1p/expm1 because numerator and denominator both vanish
    at the circle and the leading terms cancel exactly.
    """
    u = (x - 1.0) * (x + 1.0)
    gp1, gm1 = gamma + 1.0, gamma - 1.0
    log_a = -math.log1p(-2.0 * u / (gp1 * x * x))
    log_b = -math.log1p(gm1 * u / gp1)
    num = -math.expm1(log_a + 2.0 / gm1 * log_b)
    den = 2.0 * u / (gm1 * x * x + 2.0)
    return math.sqrt(max(num, 0.0) / den)


def _sonic_beta(gamma: float, x: float) -> float:
    """Normal angle of the sonic shock at pseudo-Mach ``x``, by bisection."""
    from .polar import _Polar, _bisect

    p = _Polar(GasModel(gamma), 1.0, (x, 0.0))
    lo, hi = 0.0, (1.0 - 1e-9) * p.beta_vanish
    return _bisect(lambda b: p.L_d(b) - 1.0, lo, hi, 1e-14 * max(1.0, hi))


def envelope_rhs(gas: GasModel, r: float, c_u: float, mode: str = "auto") -> float:
    """Right-hand side ``f(r)`` of the envelope ODE ``dr/dphi = -f(r)``.

    Parameters
    ----------
    mode : {"explicit", "numeric", "auto"}
        ``explicit`` evaluates the closed form (``gamma > 1`` only);
        ``numeric`` finds the sonic normal angle on the shock polar;
        ``auto`` picks explicit when available.

    Raises
    ------
    CircleDomainError
        If ``r <= c_u``.
    UnsupportedBranch
        Explicit mode for isothermal gas.
    """
    if not (r > c_u):
        raise CircleDomainError(f"r = {r!r} not outside the sonic circle of radius {c_u!r}")
    x = r / c_u
    if mode == "auto":
        mode = "numeric" if gas.isothermal else "explicit"
    if mode == "explicit":
        if gas.isothermal:
            raise UnsupportedBranch("closed form requires gamma > 1; use mode='numeric'")
        return r * _sonic_slope_explicit(gas.gamma, x)
    if mode == "numeric":
        gamma = 1.0 if gas.isothermal else gas.gamma
        return r * math.tan(_sonic_beta(gamma, x))
    raise ValueError(f"unknown mode {mode!r}")


# Dormand-Prince 5(4) tableau
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)


class _Stepper:
    """Embedded RK step for the autonomous scalar ODE ``r' = -f(r)``."""

    def __init__(self, rhs, c_u):
        self.rhs = rhs
        self.c_u = c_u
        self.nfev = 0

    def f(self, r):
        self.nfev += 1
        return -self.rhs(r)

    def step(self, r0, k0, h):
        """Return ``(r5, err)`` or ``None`` if a stage leaves the domain."""
        k = [k0]
        for i in range(1, 7):
            ri = r0 + h * sum(a * kj for a, kj in zip(_A[i], k))
            if not (ri > self.c_u):
                return None
            k.append(self.f(ri))
        r5 = r0 + h * sum(b * kj for b, kj in zip(_B5, k))
        r4 = r0 + h * sum(b * kj for b, kj in zip(_B4, k))
        return r5, abs(r5 - r4)

    def advance(self, r0, k0, h):
        """Single step to ``phi0 + h`` used during event refinement."""
        while True:
            out = self.step(r0, k0, h)
            if out is not None:
                return out[0]
            # stage fell inside the circle: split the step
            mid = self.advance(r0, k0, 0.5 * h)
            if not (mid > self.c_u):
                return mid
            r0, k0, h = mid, self.f(mid), 0.5 * h


def _point(center, phi, r):
    return np.array([center[0] + r * math.cos(phi), center[1] + r * math.sin(phi)])


def integrate_envelope(
    gas: GasModel,
    start,
    center,
    c_u: float,
    wall_a: HalfLine | None = None,
    wall_b: HalfLine | None = None,
    max_angle: float = 2 * math.pi,
    rtol: float = 1e-10,
    mode: str = "auto",
) -> EnvelopeCurve:
    """Integrate the envelope counterclockwise about ``center`` from ``start``.

    The integration variable is the polar angle.  Stops at the first of:
    crossing ``wall_a``, crossing ``wall_b``, coming within ``CIRCLE_GAP``
    of the circle of radius ``c_u``, or turning by ``max_angle``.  Each event
    is located by bisection in the angle to ``EVENT_TOL``.

    Raises
    ------
    CircleDomainError
        If ``start`` lies inside the circle.
    """
    start = vec(start)
    center = vec(center)
    rel = start - center
    r0 = norm(rel)
    phi0 = polar_angle(rel)
    if r0 < c_u * (1 - 1e-15):
        raise CircleDomainError(f"start at distance {r0!r} inside circle of radius {c_u!r}")

    rhs = (lambda r: envelope_rhs(gas, r, c_u, mode))
    stepper = _Stepper(rhs, c_u)
    walls = [(Termination.HIT_WALL_A, wall_a), (Termination.HIT_WALL_B, wall_b)]
    walls = [(tag, w) for tag, w in walls if w is not None]
    # a start on a wall (within rounding) takes its side from the first step
    scale = 1e-12 * max(1.0, norm(start))
    init_side = {tag: (w.side(start) if abs(w.side(start)) > scale else 0.0) for tag, w in walls}

    def finish(phis, rs, slopes, cause, end_phi, end_r):
        phis.append(end_phi)
        rs.append(end_r)
        slopes.append(-rhs(end_r) if end_r - c_u > 0 else 0.0)
        return EnvelopeCurve(
            center=center, c_u=c_u, phi=np.array(phis), r=np.array(rs), slope=np.array(slopes),
            termination=cause, end_point=_point(center, end_phi, end_r),
            meta={"nfev": stepper.nfev, "rtol": rtol, "phi_start": phi0},
        )

    if r0 - c_u < CIRCLE_GAP:
        return EnvelopeCurve(
            center=center, c_u=c_u, phi=np.array([phi0]), r=np.array([r0]), slope=np.array([0.0]),
            termination=Termination.AT_CIRCLE, end_point=start.copy(),
            meta={"nfev": 0, "rtol": rtol, "phi_start": phi0},
        )

    phis, rs = [phi0], [r0]
    k = stepper.f(r0)
    slopes = [k]
    phi, r = phi0, r0
    phi_max = phi0 + max_angle
    h = min(0.01, 0.1 * (r - c_u) / max(-k, 1e-300))
    while True:
        cap = 0.1 * (r - c_u) / max(-k, 1e-300)
        h = min(h, cap, phi_max - phi)
        out = stepper.step(r, k, h)
        if out is None:
            h *= 0.5
            continue
        r_new, err = out
        tol = rtol * max(abs(r_new), c_u)
        if err > tol and h > 1e-14:
            h *= max(0.2, 0.9 * (tol / err) ** 0.2)
            continue

        phi_new = phi + h
        events = _find_events(stepper, walls, init_side, center, c_u, phi, r, k, phi_new, r_new, phi_max)
        if events:
            cause, ev_phi, ev_r = events
            return finish(phis, rs, slopes, cause, ev_phi, ev_r)

        phi, r = phi_new, r_new
        k = stepper.f(r)
        phis.append(phi)
        rs.append(r)
        slopes.append(k)
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * (tol / err) ** 0.2))
        h *= fac


def _find_events(stepper, walls, init_side, center, c_u, phi0, r0, k0, phi1, r1, phi_max):
    """Earliest event in the accepted step ``[phi0, phi1]``, or ``None``."""

    def r_at(phi):
        if phi <= phi0:
            return r0
        return stepper.advance(r0, k0, phi - phi0)

    def refine(g):
        # g(phi0) has the pre-event sign, g(phi1) the post-event sign
        lo, hi = phi0, phi1
        while hi - lo > EVENT_TOL:
            mid = 0.5 * (lo + hi)
            if g(mid):
                hi = mid
            else:
                lo = mid
        return hi

    found = []
    p1 = _point(center, phi1, r1)
    for tag, wall in walls:
        s0 = init_side[tag]
        s1 = wall.side(p1)
        if s0 == 0.0:
            # started on the supporting line: the first step fixes the side
            init_side[tag] = s1
            continue
        if s1 != 0.0 and (s0 > 0.0) == (s1 > 0.0):
            continue

        def crossed(phi, wall=wall, s0=s0):
            s = wall.side(_point(center, phi, r_at(phi)))
            return s == 0.0 or (s > 0.0) != (s0 > 0.0)

        ev = refine(crossed)
        r_ev = r_at(ev)
        if wall.along(_point(center, ev, r_ev)) >= 0.0:
            found.append((tag, ev, r_ev))
        else:
            # crossed the supporting line off the ray
            init_side[tag] = s1
    if r1 - c_u < CIRCLE_GAP:
        ev = refine(lambda phi: r_at(phi) - c_u < CIRCLE_GAP)
        found.append((Termination.AT_CIRCLE, ev, r_at(ev)))
    if phi1 >= phi_max:
        found.append((Termination.MAX_ANGLE, phi_max, r1))
    if not found:
        return None
    first = min(ev for _, ev, _ in found)
    tied = [f for f in found if f[1] - first <= EVENT_TOL]
    return min(tied, key=lambda f: _PRIORITY[f[0]])


class Verdict(str, enum.Enum):
    OUTSIDE = "Outside"
    INSIDE = "Inside"
    CROSSES = "Crosses"

    def __str__(self):
        return self.value


def compare_shock_envelope(shock_samples, envelope: EnvelopeCurve, tol: float = 1e-9) -> Verdict:
    """Classify a shock curve ``[(phi, r), ...]`` against an envelope.

    Both curves are in polar coordinates about the envelope center.  Points
    where the radii agree within ``tol`` are undecided; the verdict is
    ``Outside`` (``Inside``) if every decided point past the common start has
    the shock farther from (closer to) the center, else ``Crosses``.

    Raises
    ------
    ParameterRangeError
        If the angular ranges do not overlap.
    """
    pts = np.asarray(shock_samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise ParameterRangeError("shock samples must be at least two (phi, r) pairs")
    order = np.argsort(pts[:, 0])
    s_phi, s_r = pts[order, 0], pts[order, 1]
    lo = max(s_phi[0], envelope.phi[0])
    hi = min(s_phi[-1], envelope.phi[-1])
    if not (hi > lo):
        raise ParameterRangeError("shock and envelope angle ranges do not overlap")
    grid = np.union1d(s_phi[(s_phi > lo) & (s_phi <= hi)],
                      envelope.phi[(envelope.phi > lo) & (envelope.phi <= hi)])
    d = np.interp(grid, s_phi, s_r) - envelope.r_at(grid)
    decided = d[np.abs(d) > tol]
    if decided.size and np.all(decided > 0):
        return Verdict.OUTSIDE
    if decided.size and np.all(decided < 0):
        return Verdict.INSIDE
    return Verdict.CROSSES
