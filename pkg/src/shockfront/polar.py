"""
Shock polar at a fixed shock point.

Upstream density and pseudo-velocity ``z_u`` are held fixed while the normal
``n`` rotates; ``beta`` is the counterclockwise angle from ``z_u`` to ``n``.
The downstream pseudo-velocity is ``z_d = z_u - (zn_u - zn_d) n``, so
``beta > 0`` turns the flow clockwise.  Below, ``tau(beta)`` is the unsigned
turning angle on ``[0, beta_vanish]``; it rises from zero at the normal shock
to the detachment maximum ``tau_star`` and falls back to zero where the shock
degenerates to a sound wave.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import _settings
from .errors import NoReflectedShock, SubsonicUpstream
from .gas import GasModel, sound_speed
from .shock import FlowState, ShockSolution, downstream_state
from .vec import angle_from, norm, rotate, unit, vec

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# relative margin kept from beta_vanish when bracketing roots; the shock
# solver treats |zn_u - c_u| <= 1e-10 c_u as vanishing
_EDGE = 1e-9


@dataclass(frozen=True)
class PolarPoint:
    beta: float
    n: np.ndarray
    downstream: FlowState
    L_d: float
    turning: float


@dataclass(frozen=True)
class PolarCurve:
    upstream: FlowState
    samples: list
    beta_vanish: float
    tau_star: float
    beta_star: float
    tau_sonic: float | None
    beta_sonic: float | None


@dataclass(frozen=True)
class TurningRoots:
    weak: ShockSolution
    strong: ShockSolution
    beta_weak: float
    beta_strong: float


class _Polar:
    """Shock point with fixed upstream; evaluates solutions by ``beta``.

    The shock point is placed at the origin, so upstream velocity equals
    ``z_u`` (allowed by translation invariance of the jump conditions).
    """

    def __init__(self, gas: GasModel, rho_u: float, z_u):
        self.gas = gas
        self.z_u = vec(z_u)
        self.speed = norm(self.z_u)
        self.c_u = sound_speed(gas, rho_u)
        if not (self.speed > self.c_u):
            raise SubsonicUpstream(
                f"upstream pseudo-Mach {self.speed / self.c_u!r} <= 1: no shock polar")
        self.upstream = FlowState(rho_u, self.z_u)
        self.e_u = unit(self.z_u)
        self.beta_vanish = math.acos(self.c_u / self.speed)

    def solution(self, beta: float) -> ShockSolution:
        return downstream_state(self.gas, self.upstream, (0.0, 0.0), rotate(self.e_u, beta))

    def turning(self, sol: ShockSolution) -> float:
        return angle_from(self.z_u, sol.z_d)

    def tau(self, beta: float) -> float:
        """Unsigned turning angle for ``beta`` in ``[0, beta_vanish]``."""
        if beta <= 0.0 or beta >= self.beta_vanish:
            return 0.0
        return -self.turning(self.solution(beta))

    def dtau_dbeta(self, beta: float) -> float:
        sol = self.solution(beta)
        dn, dt = polar_derivatives(self.gas, sol)
        # d arg(z_d)/d beta = cross(z_d, dz_d)/|z_d|^2 in the (t, n) frame
        z_t, z_n = sol.zt, sol.zn_d
        return (z_t * dn - z_n * dt) / (z_t * z_t + z_n * z_n)

    def L_d(self, beta: float) -> float:
        return self.solution(beta).L_d(self.gas)

    def critical(self) -> tuple[float, float]:
        """``(beta_star, tau_star)`` of the detachment maximum."""
        a, b = 0.0, self.beta_vanish
        # golden section narrows the bracket; the flat maximum is then
        # pinned as a root of the analytic slope
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        fc, fd = self.tau(c), self.tau(d)
        while b - a > 1e-4 * self.beta_vanish:
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = self.tau(c)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = self.tau(d)
        lo, hi = max(a, _EDGE * self.beta_vanish), min(b, (1 - _EDGE) * self.beta_vanish)
        s_lo, s_hi = self.dtau_dbeta(lo), self.dtau_dbeta(hi)
        if s_lo > 0.0 > s_hi:
            beta = brentq(self.dtau_dbeta, lo, hi, xtol=1e-12 * max(1.0, self.beta_vanish))
        else:
            beta = 0.5 * (a + b)
        return beta, self.tau(beta)

    def sonic(self, beta_star: float) -> float | None:
        """``beta`` with downstream ``L_d = 1``, weak side first."""
        top = (1 - _EDGE) * self.beta_vanish
        for lo, hi in ((beta_star, top), (0.0, beta_star)):
            f_lo, f_hi = self.L_d(lo) - 1.0, self.L_d(hi) - 1.0
            if f_lo == 0.0:
                return lo
            if f_lo < 0.0 < f_hi:
                return _bisect(lambda b: self.L_d(b) - 1.0, lo, hi, 1e-12)
        return None


def _bisect(fun, lo, hi, tol):
    """Plain bisection for an increasing ``fun`` with ``fun(lo) < 0 < fun(hi)``."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fun(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def polar_derivatives(gas: GasModel, sol: ShockSolution) -> tuple[float, float]:
    """Normal and tangential components of ``d v_d / d beta``.

    With ``w = zn_d`` as a function of ``zn_u`` at fixed upstream density,
    implicit differentiation of the jump conditions gives

        dw/dzn_u = (zn_d/zn_u) (zn_u**2 - c_d**2) / (zn_d**2 - c_d**2)

    Returns ``(0, 0)`` for a vanishing shock.
    """
    if sol.vanishing or sol.zn_d == sol.zn_u:
        return 0.0, 0.0
    zn_u, zn_d = sol.zn_u, sol.zn_d
    c2 = sound_speed(gas, sol.downstream.rho) ** 2
    dw = (zn_d / zn_u) * (zn_u * zn_u - c2) / (zn_d * zn_d - c2)
    return sol.zt * (dw - 1.0), zn_d - zn_u


def polar_curve(gas: GasModel, rho_u: float, z_u, n_samples: int = 257) -> PolarCurve:
    """Sample the shock polar uniformly in ``beta`` over ``[-beta_v, beta_v]``.

    Raises
    ------
    SubsonicUpstream
        If ``|z_u|`` does not exceed the upstream sound speed.
    """
    if n_samples < 64:
        raise ValueError("n_samples must be at least 64")
    p = _Polar(gas, rho_u, z_u)
    samples = []
    for beta in np.linspace(-p.beta_vanish, p.beta_vanish, n_samples):
        beta = float(beta)
        if abs(beta) >= p.beta_vanish * (1 - 1e-15):
            n = rotate(p.e_u, beta)
            samples.append(PolarPoint(beta, n, p.upstream, p.speed / p.c_u, 0.0))
            continue
        sol = p.solution(beta)
        # the normal shock does not turn; avoid a rounding-level angle
        turning = 0.0 if beta == 0.0 else p.turning(sol)
        samples.append(PolarPoint(beta, sol.n, sol.downstream, sol.L_d(gas), turning))
    beta_star, tau_star = p.critical()
    beta_sonic = p.sonic(beta_star)
    tau_sonic = None if beta_sonic is None else p.tau(beta_sonic)
    return PolarCurve(
        upstream=p.upstream, samples=samples, beta_vanish=p.beta_vanish,
        tau_star=tau_star, beta_star=beta_star, tau_sonic=tau_sonic, beta_sonic=beta_sonic,
    )


def detachment_angle(gas: GasModel, rho_u: float, z_u) -> float:
    """Largest turning angle ``tau_star`` any admissible shock can produce."""
    return _Polar(gas, rho_u, z_u).critical()[1]


def solve_turning(gas: GasModel, rho_u: float, z_u, tau: float, sign: int = -1) -> TurningRoots:
    """Weak and strong shocks turning ``z_u`` by ``tau``.

    Parameters
    ----------
    tau : float
        Unsigned turning angle (radians).
    sign : {-1, +1}
        Direction of the turn: -1 clockwise (``beta > 0``), +1 counterclockwise.

    Raises
    ------
    NoReflectedShock
        If ``tau`` exceeds the detachment angle.
    """
    if tau < 0.0:
        raise ValueError("tau must be non-negative")
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    p = _Polar(gas, rho_u, z_u)
    beta_star, tau_star = p.critical()
    tol = _settings.root_tol()
    if tau > tau_star + 1e-12:
        raise NoReflectedShock(f"turning {tau!r} exceeds detachment angle {tau_star!r}")
    if tau >= tau_star - 1e-12:
        b_weak = b_strong = beta_star
    elif tau == 0.0:
        b_strong, b_weak = 0.0, p.beta_vanish
    else:
        def g(beta):
            return p.tau(beta) - tau
        b_strong = brentq(g, 0.0, beta_star, xtol=tol)
        b_weak = brentq(g, beta_star, p.beta_vanish, xtol=tol)
    s = -sign
    return TurningRoots(
        weak=_solution_or_vanishing(p, s * b_weak), strong=_solution_or_vanishing(p, s * b_strong),
        beta_weak=s * b_weak, beta_strong=s * b_strong,
    )


def _solution_or_vanishing(p: _Polar, beta: float) -> ShockSolution:
    if abs(beta) >= p.beta_vanish:
        # the vanishing normal: zn_u = c_u exactly, no jump
        n = rotate(p.e_u, beta)
        return downstream_state(p.gas, p.upstream, (0.0, 0.0), n)
    return p.solution(beta)
