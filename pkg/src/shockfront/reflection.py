"""
Local regular reflection at a wedge and the transition criteria.

Frame: the upstream wall A is the negative x-axis, the corner sits at the
origin and the downstream wall B is the ray at polar angle ``theta``; gas
fills the sector between them.  Region I behind the incident shock has
``rho_I = c_I = 1`` and velocity ``(M_I, 0)``.  The incident shock meets B in
the reflection point ``xi_R``; the reflected shock there must turn the I
pseudo-velocity ``z_I = v_I - xi_R`` parallel to B.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .envelope import (
    EnvelopeCurve, HalfLine, Termination, _sonic_beta, _sonic_slope_explicit,
    integrate_envelope,
)
from .errors import (
    BracketError, CircleDomainError, DomainError, NoIncidentShock, NoReflectedShock, NoShock,
    NoSonicPoint, ParameterRangeError, SubsonicUpstream,
)
from .gas import GasModel, pressure, sound_speed
from .polar import _Polar, solve_turning
from .shock import FlowState, IncidentShock, ShockSolution, downstream_state, incident_shock
from .vec import angle_from, dot, norm, rot90, unit, vec

SWEEP_STEP = 1e-3
ANGLE_TOL = 1e-10
WALL_SNAP = 1e-8
_THETA_TOP = 0.5 * math.pi


@dataclass
class RRConfiguration:
    gas: GasModel
    M_I: float
    beta_Q: float
    theta: float
    wall_a: HalfLine
    wall_b: HalfLine
    v_I: np.ndarray
    incident: IncidentShock
    xi_R: np.ndarray
    reflected: ShockSolution
    strong: ShockSolution
    tau: float
    L_R: float
    xi_C0: np.ndarray | None
    verdicts: dict = field(default_factory=dict)
    envelope: EnvelopeCurve | None = None

    @property
    def n_B(self) -> np.ndarray:
        """Unit normal of wall B pointing into the gas."""
        return rot90(self.wall_b.direction)

    @property
    def slip_residual(self) -> float:
        return dot(self.reflected.downstream.v, self.n_B)


@dataclass(frozen=True)
class TransitionAngles:
    theta_d: float
    theta_s: float
    theta_N: float | None
    meta: dict = field(default_factory=dict, compare=False)


class Status(str, enum.Enum):
    NO_INCIDENT_SHOCK = "NoIncidentShock"
    ENVELOPE_FAILS = "EnvelopeFails"
    FEASIBLE = "Feasible"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FeasibilityRecord:
    gamma: float
    M_I: float
    status: Status
    theta_s: float | None = None
    end_point: tuple | None = None
    termination: str | None = None


@dataclass(frozen=True)
class EnvelopeCheck:
    ok: bool
    termination: Termination
    end_point: np.ndarray
    curve: EnvelopeCurve | None = None


def wall_a() -> HalfLine:
    return HalfLine((0.0, 0.0), (-1.0, 0.0))


def wall_b(theta: float) -> HalfLine:
    return HalfLine((0.0, 0.0), (math.cos(theta), math.sin(theta)))


class _Wedge:
    """Quantities at the reflection point for fixed (gas, M_I, beta_Q)."""

    def __init__(self, gas: GasModel, M_I: float, beta_Q: float = 0.0):
        self.gas = gas
        self.M_I = M_I
        self.beta_Q = beta_Q
        self.rho_I = gas.rho_ref
        self.c_I = sound_speed(gas, self.rho_I)
        self._incident = incident_shock(gas, M_I, 0.0) if beta_Q == 0.0 else None

    def incident(self, theta: float) -> IncidentShock:
        if self._incident is not None:
            return self._incident
        return incident_shock(self.gas, self.M_I, self.beta_Q, theta)

    def reflection_point(self, theta: float, inc: IncidentShock | None = None) -> np.ndarray:
        inc = self.incident(theta) if inc is None else inc
        e_b = vec(math.cos(theta), math.sin(theta))
        denom = dot(inc.n, e_b)
        s = inc.support / denom if denom != 0.0 else math.inf
        if not (0.0 < s < math.inf):
            raise ParameterRangeError(f"incident shock does not meet wall B at theta={theta!r}")
        return s * e_b

    def turning(self, theta: float, xi_R=None):
        """``(z_I, tau, sign)``: unsigned turning to the wall and its direction."""
        if xi_R is None:
            xi_R = self.reflection_point(theta)
        z_I = self.incident(theta).v_I - xi_R
        e_b = vec(math.cos(theta), math.sin(theta))
        target = e_b if dot(z_I, e_b) > 0.0 else -e_b
        ang = angle_from(z_I, target)
        return z_I, abs(ang), (1 if ang > 0.0 else -1)

    def polar(self, z_I) -> _Polar:
        return _Polar(self.gas, self.rho_I, z_I)

    def sonic_margin(self, theta: float) -> float:
        """``tau_sonic - tau``: positive exactly when the weak reflection is supersonic."""
        try:
            z_I, tau, _ = self.turning(theta)
            p = self.polar(z_I)
            x = p.speed / p.c_u
            if self.gas.isothermal:
                beta = _sonic_beta(1.0, x)
            else:
                beta = math.atan(_sonic_slope_explicit(self.gas.gamma, x))
            return p.tau(beta) - tau
        except (SubsonicUpstream, ParameterRangeError):
            return -1.0
        except DomainError:
            # isothermal compression beyond float range
            return None

    def detach_margin(self, theta: float) -> float:
        """``tau_star - tau``: positive while a reflected shock exists."""
        try:
            z_I, tau, _ = self.turning(theta)
            return self.polar(z_I).critical()[1] - tau
        except (SubsonicUpstream, ParameterRangeError):
            return -1.0
        except DomainError:
            return None

    def weak_reflection(self, theta: float):
        inc = self.incident(theta)
        xi_R = self.reflection_point(theta, inc)
        z_I, tau, sign = self.turning(theta, xi_R)
        roots = solve_turning(self.gas, self.rho_I, z_I, tau, sign)
        upstream = FlowState(self.rho_I, inc.v_I)
        weak = downstream_state(self.gas, upstream, xi_R, roots.weak.n)
        strong = downstream_state(self.gas, upstream, xi_R, roots.strong.n)
        return inc, xi_R, tau, weak, strong

    def L_R(self, theta: float) -> float:
        return self.weak_reflection(theta)[3].L_d(self.gas)

    def von_neumann_margin(self, theta: float) -> float | None:
        """Pressure behind a pseudo-normal Mach stem minus behind the weak reflection."""
        try:
            inc, xi_R, _, weak, _ = self.weak_reflection(theta)
            stem = mach_stem(self.gas, inc, xi_R)
        except (SubsonicUpstream, NoReflectedShock, ParameterRangeError, DomainError):
            return None
        if stem is None:
            return None
        return pressure(self.gas, stem.downstream.rho) - pressure(self.gas, weak.downstream.rho)


def mach_stem(gas: GasModel, inc: IncidentShock, xi_R) -> ShockSolution | None:
    """Shock through ``xi_R`` perpendicular to wall B with Q upstream.

    Since ``v_Q`` and ``xi_R`` are both parallel to wall B, so is ``z_Q`` and
    the stem is pseudo-normal.  Returns ``None`` if Q is pseudo-subsonic
    there.
    """
    upstream = FlowState(inc.rho_Q, inc.v_Q)
    z_Q = inc.v_Q - vec(xi_R)
    if norm(z_Q) <= inc.c_Q:
        return None
    try:
        return downstream_state(gas, upstream, xi_R, unit(z_Q))
    except NoShock:
        return None


def sonic_points(gas: GasModel, sol: ShockSolution, epsilon: float = 0.0):
    """Where a straight shock meets the circle ``L_d = sqrt(1 - epsilon)``.

    The downstream state of a straight shock is constant, so the locus is
    the circle about ``v_d`` with radius ``c_d sqrt(1 - epsilon)``.

    Returns
    -------
    (xi_L, xi_R_pt) : tuple of ndarray
        Intersections ordered along the tangent ``t``.

    Raises
    ------
    NoSonicPoint
        If the shock line misses the circle.
    """
    if not (0.0 <= epsilon < 1.0):
        raise ValueError("epsilon must be in [0, 1)")
    c = sound_speed(gas, sol.downstream.rho)
    rad2 = c * c * (1.0 - epsilon)
    w = sol.downstream.v - sol.xi
    wt, wn = dot(w, sol.t), dot(w, sol.n)
    disc = rad2 - wn * wn
    if disc < 0.0:
        raise NoSonicPoint("shock line misses the downstream sonic circle")
    root = math.sqrt(disc)
    return sol.xi + (wt - root) * sol.t, sol.xi + (wt + root) * sol.t


def build_local_rr(gas: GasModel, M_I: float, beta_Q: float, theta: float,
                   envelope: bool = True) -> RRConfiguration:
    """Assemble the local regular reflection for wedge angle ``theta``.

    ``beta_Q`` is the incident-shock inclination from vertical (0 for the
    classical vertical shock).  The weak reflected shock is used.

    Raises
    ------
    NoIncidentShock, SubsonicUpstream, NoReflectedShock
    """
    if not (0.0 < theta < math.pi):
        raise ParameterRangeError(f"theta must be in (0, pi), got {theta!r}")
    wedge = _Wedge(gas, M_I, beta_Q)
    inc, xi_R, tau, weak, strong = wedge.weak_reflection(theta)
    L_R = weak.L_d(gas)
    try:
        pts = sonic_points(gas, weak)
        xi_C0 = min(pts, key=lambda p: norm(p - xi_R))
    except NoSonicPoint:
        xi_C0 = None
    cfg = RRConfiguration(
        gas=gas, M_I=M_I, beta_Q=beta_Q, theta=theta, wall_a=wall_a(), wall_b=wall_b(theta),
        v_I=inc.v_I, incident=inc, xi_R=xi_R, reflected=weak, strong=strong, tau=tau,
        L_R=L_R, xi_C0=xi_C0,
    )
    cfg.verdicts["sonic_ok"] = L_R > 1.0
    cfg.verdicts["vInB_ok"] = abs(dot(inc.v_I, cfg.n_B)) <= wedge.c_I
    if envelope:
        check = check_envelope_condition(cfg)
        cfg.verdicts["envelope_ok"] = check.ok
        cfg.envelope = check.curve
    return cfg


def check_envelope_condition(config: RRConfiguration, rtol: float = 1e-10) -> EnvelopeCheck:
    """Integrate the envelope from ``xi_C0`` about ``v_I``; ok iff it reaches wall A first."""
    c_I = sound_speed(config.gas, config.incident.rho_I)
    start = config.xi_C0
    if start is None:
        return EnvelopeCheck(False, Termination.AT_CIRCLE, config.xi_R.copy())
    # at the sonic angle the sonic point coincides with xi_R up to root
    # tolerance; put it on wall B so rounding cannot place it outside
    if abs(config.wall_b.side(start)) <= WALL_SNAP * max(1.0, norm(start)):
        start = config.wall_b.along(start) * config.wall_b.direction
    try:
        curve = integrate_envelope(config.gas, start, config.v_I, c_I,
                                   wall_a=config.wall_a, wall_b=config.wall_b, rtol=rtol)
    except CircleDomainError:
        return EnvelopeCheck(False, Termination.AT_CIRCLE, np.array(start, dtype=float))
    ok = curve.termination == Termination.HIT_WALL_A
    return EnvelopeCheck(ok, curve.termination, curve.end_point, curve)


def _sweep_root(fun, top: float, bottom: float, step: float = SWEEP_STEP, tol: float = ANGLE_TOL):
    """First sign change of ``fun`` walking down from ``top``, then bisection.

    ``fun`` returns ``None`` where it cannot be evaluated (float overflow
    for very strong isothermal shocks); such angles at the top of the window
    are skipped.  The first evaluable value must be positive.  Returns the
    angle where ``fun`` turns non-positive, or raises ``BracketError``.
    """
    hi = top
    f_hi = fun(hi)
    while f_hi is None and hi - step > bottom:
        hi -= step
        f_hi = fun(hi)
    if f_hi is None or not f_hi > 0.0:
        raise BracketError(f"margin not positive at the sweep start theta={top!r}")
    lo = hi
    while True:
        lo = max(bottom, hi - step)
        f_lo = fun(lo)
        if f_lo is not None and f_lo <= 0.0:
            break
        if lo <= bottom:
            raise BracketError("no sign change in the sweep window")
        hi = lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = fun(mid)
        if f_mid is not None and f_mid > 0.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def sonic_angle(gas: GasModel, M_I: float, beta_Q: float = 0.0) -> float:
    """Smallest wedge angle with a supersonic weak reflection (``L_R = 1``)."""
    wedge = _Wedge(gas, M_I, beta_Q)
    return _sweep_root(wedge.sonic_margin, _THETA_TOP - SWEEP_STEP, SWEEP_STEP)


def detachment_angle(gas: GasModel, M_I: float, beta_Q: float = 0.0,
                     theta_s: float | None = None) -> float:
    """Smallest wedge angle at which a reflected shock exists."""
    wedge = _Wedge(gas, M_I, beta_Q)
    # detachment is never above the sonic angle, so start just above it
    top = _THETA_TOP - SWEEP_STEP if theta_s is None else min(theta_s + SWEEP_STEP, _THETA_TOP - SWEEP_STEP)
    return _sweep_root(wedge.detach_margin, top, SWEEP_STEP)


def von_neumann_angle(gas: GasModel, M_I: float, beta_Q: float = 0.0,
                      theta_d: float | None = None) -> float | None:
    """Wedge angle where stem and reflected-shock pressures agree, or ``None``."""
    wedge = _Wedge(gas, M_I, beta_Q)
    if theta_d is None:
        theta_d = detachment_angle(gas, M_I, beta_Q)
    top = _THETA_TOP - SWEEP_STEP
    grid = np.arange(top, theta_d, -SWEEP_STEP)
    prev_theta, prev = None, None
    for theta in grid:
        cur = wedge.von_neumann_margin(float(theta))
        if cur is None:
            prev_theta, prev = None, None
            continue
        if prev is not None and (cur > 0.0) != (prev > 0.0):
            lo, hi = float(theta), prev_theta
            f_hi = prev
            while hi - lo > ANGLE_TOL:
                mid = 0.5 * (lo + hi)
                f_mid = wedge.von_neumann_margin(mid)
                if f_mid is None:
                    break
                if (f_mid > 0.0) == (f_hi > 0.0):
                    hi, f_hi = mid, f_mid
                else:
                    lo = mid
            return 0.5 * (lo + hi)
        prev_theta, prev = float(theta), cur
    return None


def transition_angles(gas: GasModel, M_I: float, beta_Q: float = 0.0,
                      von_neumann: bool = True) -> TransitionAngles:
    """Detachment, sonic and von Neumann wedge angles (radians).

    Raises
    ------
    NoIncidentShock
        If the incident shock does not exist.
    """
    theta_s = sonic_angle(gas, M_I, beta_Q)
    theta_d = detachment_angle(gas, M_I, beta_Q, theta_s=theta_s)
    theta_N = von_neumann_angle(gas, M_I, beta_Q, theta_d=theta_d) if von_neumann else None
    meta = {"mach_stem": "pseudo-normal shock through xi_R perpendicular to wall B, Q upstream"}
    return TransitionAngles(theta_d=theta_d, theta_s=theta_s, theta_N=theta_N, meta=meta)


def feasibility_record(gamma: float, M_I: float) -> FeasibilityRecord:
    gas = GasModel(gamma)
    try:
        theta_s = sonic_angle(gas, M_I)
    except NoIncidentShock:
        return FeasibilityRecord(gamma, M_I, Status.NO_INCIDENT_SHOCK)
    except BracketError:
        # no supersonic reflection anywhere in the sweep window
        return FeasibilityRecord(gamma, M_I, Status.ENVELOPE_FAILS)
    try:
        cfg = build_local_rr(gas, M_I, 0.0, theta_s, envelope=False)
    except (SubsonicUpstream, NoReflectedShock):
        return FeasibilityRecord(gamma, M_I, Status.ENVELOPE_FAILS, theta_s)
    check = check_envelope_condition(cfg)
    status = Status.FEASIBLE if check.ok else Status.ENVELOPE_FAILS
    return FeasibilityRecord(gamma, M_I, status, theta_s, tuple(check.end_point.tolist()),
                             str(check.termination))


def feasibility_scan(gamma_grid, M_I_grid, workers: int = 1) -> list[FeasibilityRecord]:
    """Classify every ``(gamma, M_I)`` cell at ``theta = theta_s``; row-major in gamma."""
    cells = [(float(g), float(m)) for g in gamma_grid for m in M_I_grid]
    if workers > 1 and len(cells) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(feasibility_record, *zip(*cells)))
    return [feasibility_record(g, m) for g, m in cells]


def vdzero_shock(gas: GasModel, v_u_y: float, rho_u: float, beta: float):
    """Straight shock through ``(0, eta)`` with downstream ``v_y = 0``.

    Upstream velocity is ``(0, v_u_y)`` with ``v_u_y < 0`` and the downstream
    normal is ``(sin beta, -cos beta)``.  Returns ``(eta, ShockSolution)``.

    Raises
    ------
    NoShock
        If no admissible shock gives ``v_y = 0``.
    """
    if not (v_u_y < 0.0):
        raise ValueError("v_u_y must be negative")
    if not (abs(beta) < 0.5 * math.pi):
        raise ValueError("|beta| must be below pi/2")
    upstream = FlowState(rho_u, (0.0, v_u_y))
    n = vec(math.sin(beta), -math.cos(beta))
    c_u = sound_speed(gas, rho_u)

    def vy(eta):
        return downstream_state(gas, upstream, (0.0, eta), n).downstream.v[1]

    # zn_u = -v_u_y cos(beta) + eta cos(beta) must exceed c_u
    cosb = math.cos(beta)
    eta_min = c_u / cosb + v_u_y
    lo = eta_min + 1e-12 * max(1.0, abs(eta_min))
    if not (vy(lo) < 0.0):
        raise NoShock("downstream v_y not negative at the weakest shock")
    hi = lo + 1.0
    while vy(hi) <= 0.0:
        hi = lo + 2.0 * (hi - lo)
        if hi - lo > 1e8:
            raise NoShock("no eta with downstream v_y = 0")
    from scipy.optimize import brentq

    eta = brentq(vy, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return eta, downstream_state(gas, upstream, (0.0, eta), n)
