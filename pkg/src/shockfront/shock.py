"""
Rankine-Hugoniot conditions for self-similar potential flow.

At a shock point the tangential pseudo-velocity is continuous and the
normal components obey

    rho_u * zn_u = rho_d * zn_d
    pi(rho_d) - pi(rho_u) = (zn_u**2 - zn_d**2) / 2

with the normal pointing downstream (``zn_u, zn_d > 0``).  The second line is
continuity of the potential; neither relation depends on the shock point
except through the pseudo-velocity ``z = v - xi``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import _settings
from .errors import DomainError, NoIncidentShock, NoShock, OrientationError
from .gas import GasModel, pi, pi_inv, sound_speed
from .vec import dot, norm, rot90, unit, vec

# relative width of the band |zn_u - c_u| treated as a zero-strength shock
VANISH_TOL = 1e-10
_MAX_LOG_COMPRESSION = 700.0


@dataclass(frozen=True)
class FlowState:
    """Constant state: density and velocity."""

    rho: float
    v: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        if not (self.rho > 0.0):
            raise ValueError(f"density must be positive, got {self.rho!r}")
        object.__setattr__(self, "v", vec(self.v))

    def pseudo(self, gas: GasModel, xi) -> "PseudoState":
        xi = vec(xi)
        z = self.v - xi
        return PseudoState(xi=xi, z=z, L=norm(z) / sound_speed(gas, self.rho))


@dataclass(frozen=True)
class PseudoState:
    xi: np.ndarray
    z: np.ndarray
    L: float


@dataclass(frozen=True)
class ShockSolution:
    """One shock point with oriented normal and both adjacent states.

    ``n`` points downstream and ``t`` is ``n`` rotated by +90 degrees.
    ``zn_u``, ``zn_d`` are the normal pseudo-velocities and ``zt`` the
    common tangential component.
    """

    xi: np.ndarray
    n: np.ndarray
    t: np.ndarray
    upstream: FlowState
    downstream: FlowState
    zn_u: float
    zn_d: float
    zt: float
    sigma: float
    vanishing: bool = False

    @property
    def z_u(self) -> np.ndarray:
        return self.upstream.v - self.xi

    @property
    def z_d(self) -> np.ndarray:
        return self.downstream.v - self.xi

    def L_d(self, gas: GasModel) -> float:
        return norm(self.z_d) / sound_speed(gas, self.downstream.rho)


@dataclass(frozen=True)
class IncidentShock:
    """Straight incident shock between the Q (ahead) and I (behind) regions.

    The shock is the line ``{xi : xi . n = support}``; ``n`` points into I.
    For a vertical shock ``xi_s`` is its x-position, which equals its speed.
    """

    xi_s: float
    rho_Q: float
    c_Q: float
    n: np.ndarray
    support: float
    v_I: np.ndarray
    v_Q: np.ndarray
    rho_I: float

    def solution_at(self, gas: GasModel, xi) -> ShockSolution:
        return downstream_state(gas, FlowState(self.rho_Q, self.v_Q), xi, self.n)


def _expm1_ratio(x: float) -> float:
    return math.expm1(x) / x if x != 0.0 else 1.0


def normal_jump(gas: GasModel, rho_u: float, zn_u: float) -> tuple[float, float]:
    """Nontrivial root ``(rho_d, zn_d)`` of the normal jump conditions.

    Requires ``zn_u`` strictly above the upstream sound speed.  The unknown
    is the log compression ``l = log(rho_d/rho_u)``; with ``zn_d = zn_u e^-l``
    the potential jump divided by ``l`` reads

        c_u**2 expm1((gamma-1) l)/((gamma-1) l) - zn_u**2 (1 - e^-2l)/(2 l) = 0

    which removes the trivial root ``l = 0`` and stays well conditioned for
    weak shocks.  The left side equals ``c_u**2 - zn_u**2 < 0`` at ``l = 0``
    and increases without bound (to ``c_u**2`` for isothermal gas).
    """
    c2 = sound_speed(gas, rho_u) ** 2
    zn2 = zn_u * zn_u
    gm1 = 0.0 if gas.isothermal else gas.gamma - 1.0

    def residual(l):
        return c2 * _expm1_ratio(gm1 * l) - zn2 * _expm1_ratio(-2.0 * l)

    if residual(0.0) >= 0.0:
        return rho_u, zn_u
    hi = 1.0
    while residual(hi) <= 0.0:
        hi *= 2.0
    l = brentq(residual, 0.0, hi, xtol=_settings.root_tol() * 1e-3 * min(1.0, (zn2 - c2) / c2),
               rtol=4 * np.finfo(float).eps, maxiter=500)
    if l > _MAX_LOG_COMPRESSION:
        # isothermal potential shocks compress like exp(zn**2 / 2c**2)
        raise DomainError(f"downstream density overflows (log compression {l!r})")
    return rho_u * math.exp(l), zn_u * math.exp(-l)


def downstream_state(gas: GasModel, upstream: FlowState, xi, n) -> ShockSolution:
    """Downstream state behind a shock through ``xi`` with normal ``n``.

    Parameters
    ----------
    gas : GasModel
    upstream : FlowState
    xi : array_like
        Shock point in the similarity plane.
    n : array_like
        Unit normal, must point downstream (``(v_u - xi) . n > 0``).

    Returns
    -------
    ShockSolution
        The admissible compressive solution.  A normal-sonic upstream gives
        the zero-strength shock with ``vanishing=True``.

    Raises
    ------
    OrientationError
        If the normal does not point downstream.
    NoShock
        If the upstream normal pseudo-Mach number is below one.
    """
    xi = vec(xi)
    n = unit(n)
    t = rot90(n)
    z_u = upstream.v - xi
    zn_u = dot(z_u, n)
    zt = dot(z_u, t)
    if not (zn_u > 0.0):
        raise OrientationError(f"normal pseudo-velocity {zn_u!r} not positive")
    c_u = sound_speed(gas, upstream.rho)
    if abs(zn_u - c_u) <= VANISH_TOL * c_u:
        rho_d, zn_d, vanishing = upstream.rho, zn_u, True
    elif zn_u < c_u:
        raise NoShock(f"normal pseudo-Mach {zn_u / c_u!r} <= 1")
    else:
        rho_d, zn_d = normal_jump(gas, upstream.rho, zn_u)
        vanishing = rho_d == upstream.rho
    v_d = xi + zt * t + zn_d * n
    return ShockSolution(
        xi=xi, n=n, t=t, upstream=upstream, downstream=FlowState(rho_d, v_d),
        zn_u=zn_u, zn_d=zn_d, zt=zt, sigma=dot(xi, n), vanishing=vanishing,
    )


def shock_residual(gas: GasModel, sol: ShockSolution) -> tuple[float, float]:
    """Signed (mass, Bernoulli) residuals of a shock solution."""
    zn_u = dot(sol.upstream.v - sol.xi, sol.n)
    zn_d = dot(sol.downstream.v - sol.xi, sol.n)
    mass = sol.upstream.rho * zn_u - sol.downstream.rho * zn_d
    bern = (pi(gas, sol.downstream.rho) - pi(gas, sol.upstream.rho)
            - 0.5 * (zn_u * zn_u - zn_d * zn_d))
    return mass, bern


def tangential_mismatch(sol: ShockSolution) -> float:
    return dot(sol.upstream.v - sol.downstream.v, sol.t)


def _incident_normal_speed(gas: GasModel, jump: float, rho_I: float) -> tuple[float, float]:
    """Solve for the Q-side normal speed ``w`` and density ``rho_Q``.

    ``jump`` is the normal velocity jump ``(v_Q - v_I) . n`` (positive).
    The unknown is the I-side normal speed ``u = w - jump``, which can be
    tiny for strong isothermal shocks.  Mass gives
    ``rho_Q = rho_I u / (u + jump)`` (increasing in ``u``) and the potential
    jump gives ``pi(rho_Q) = pi(rho_I) - jump*u - jump**2/2`` (decreasing),
    so there is at most one crossing.
    """
    base = pi(gas, rho_I) - 0.5 * jump * jump
    if not (base > gas.vacuum_bound):
        raise NoIncidentShock(
            f"normal velocity jump {jump!r} exceeds the vacuum limit for gamma={gas.gamma!r}")

    def residual(u):
        q = base - jump * u
        rho_b = 0.0 if q <= gas.vacuum_bound else pi_inv(gas, q)
        return rho_b * (u + jump) - rho_I * u

    if math.isfinite(gas.vacuum_bound):
        hi = (base - gas.vacuum_bound) / jump
    else:
        hi = 1.0
        while residual(hi) > 0.0:
            hi *= 2.0
    u = brentq(residual, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=1000)
    w = u + jump
    rho_Q = rho_I * u / w
    if rho_Q == 0.0:
        raise NoIncidentShock("Q-region density underflows")
    return w, rho_Q


def incident_shock(gas: GasModel, M_I: float, beta_Q: float = 0.0, theta: float | None = None) -> IncidentShock:
    """Incident shock separating a quiescent-or-sliding Q region from I.

    Normalization: region I has ``rho_I = gas.rho_ref``, sound speed
    ``gas.c_ref`` and velocity ``(M_I * c_ref, 0)`` parallel to the upstream
    wall.  ``beta_Q`` is the inclination from vertical.  For ``beta_Q = 0``
    region Q is at rest; otherwise ``v_Q`` slides along the downstream wall
    at angle ``theta`` (needed then), which is the only choice keeping the
    tangential velocity continuous.
    """
    if not (M_I > 0.0):
        raise ValueError(f"M_I must be positive, got {M_I!r}")
    v_I = vec(M_I * gas.c_ref, 0.0)
    n = vec(-math.cos(beta_Q), math.sin(beta_Q))
    if beta_Q == 0.0:
        v_Q = vec(0.0, 0.0)
        jump = M_I * gas.c_ref
    else:
        if theta is None:
            raise ValueError("theta is required for a non-vertical incident shock")
        denom = math.sin(theta + beta_Q)
        if not (denom > 0.0):
            raise NoIncidentShock("incident shock does not meet the downstream wall")
        speed = M_I * gas.c_ref * math.sin(beta_Q) / denom
        v_Q = speed * vec(math.cos(theta), math.sin(theta))
        jump = dot(v_Q - v_I, n)
        if not (jump > 0.0):
            raise NoIncidentShock("incident shock would be expansive")
    w, rho_Q = _incident_normal_speed(gas, jump, gas.rho_ref)
    support = float(dot(v_Q, n) - w)
    xi_s = float(support / n[0])
    return IncidentShock(
        xi_s=xi_s, rho_Q=rho_Q, c_Q=sound_speed(gas, rho_Q), n=n, support=support,
        v_I=v_I, v_Q=v_Q, rho_I=gas.rho_ref,
    )


def vertical_incident_shock(gas: GasModel, M_I: float) -> IncidentShock:
    """Vertical incident shock into gas at rest, ``rho_I = c_I = 1`` frame.

    Raises
    ------
    NoIncidentShock
        If ``M_I**2 >= 2 c_I**2 / (gamma - 1)``: the Q-region density would
        have to be at or below vacuum.
    """
    return incident_shock(gas, M_I, 0.0)
