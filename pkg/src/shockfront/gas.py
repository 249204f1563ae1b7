"""
Polytropic (gamma-law) gas for isentropic potential flow.

Pressure is ``p = c_ref**2 * rho_ref / gamma * (rho / rho_ref)**gamma``; the
enthalpy-like potential ``pi`` satisfies ``d(pi)/d(rho) = p'(rho) / rho`` and
vanishes at the reference density.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, VacuumError

# below this |gamma - 1| the isothermal (log) formulas are used
ISOTHERMAL_EPS = 1e-12


@dataclass(frozen=True)
class GasModel:
    """Polytropic gas with reference state (rho_ref, c_ref)."""

    gamma: float
    rho_ref: float = 1.0
    c_ref: float = 1.0

    def __post_init__(self):
        if not (self.gamma >= 1.0):
            raise DomainError(f"gamma must be >= 1, got {self.gamma!r}")
        if not (self.rho_ref > 0.0 and self.c_ref > 0.0):
            raise DomainError("reference density and sound speed must be positive")

    @property
    def isothermal(self) -> bool:
        return abs(self.gamma - 1.0) < ISOTHERMAL_EPS

    @property
    def vacuum_bound(self) -> float:
        """Infimum of ``pi`` (``-inf`` for isothermal gas)."""
        if self.isothermal:
            return -math.inf
        return -self.c_ref**2 / (self.gamma - 1.0)

    def pi(self, rho: float) -> float:
        return pi(self, rho)

    def pi_inv(self, q: float) -> float:
        return pi_inv(self, q)

    def sound_speed(self, rho: float) -> float:
        return sound_speed(self, rho)

    def pressure(self, rho: float) -> float:
        return pressure(self, rho)


def _check_rho(rho):
    if not (rho > 0.0):
        raise DomainError(f"density must be positive, got {rho!r}")


def pi(gas: GasModel, rho: float) -> float:
    """Enthalpy-like potential ``pi(rho)``, zero at ``rho_ref``."""
    _check_rho(rho)
    if gas.isothermal:
        return gas.c_ref**2 * math.log(rho / gas.rho_ref)
    gm1 = gas.gamma - 1.0
    # expm1 keeps continuity in gamma -> 1 and accuracy near rho_ref
    return gas.c_ref**2 * math.expm1(gm1 * math.log(rho / gas.rho_ref)) / gm1


def pi_inv(gas: GasModel, q: float) -> float:
    """Density with ``pi(rho) = q``.

    Raises
    ------
    VacuumError
        If ``q`` is at or below the vacuum bound ``-c_ref**2/(gamma-1)``.
    """
    if gas.isothermal:
        return gas.rho_ref * math.exp(q / gas.c_ref**2)
    gm1 = gas.gamma - 1.0
    arg = gm1 * q / gas.c_ref**2
    if not (q > gas.vacuum_bound and arg > -1.0):
        raise VacuumError(f"pi = {q!r} at or below vacuum bound {gas.vacuum_bound!r}")
    return gas.rho_ref * math.exp(math.log1p(arg) / gm1)


def sound_speed(gas: GasModel, rho: float) -> float:
    _check_rho(rho)
    if gas.isothermal:
        return gas.c_ref
    return gas.c_ref * (rho / gas.rho_ref) ** (0.5 * (gas.gamma - 1.0))


def pressure(gas: GasModel, rho: float) -> float:
    _check_rho(rho)
    return gas.c_ref**2 * gas.rho_ref / gas.gamma * (rho / gas.rho_ref) ** gas.gamma


def normal_sonic_density(gas: GasModel, mass_flux: float) -> float:
    """Density at which the normal velocity ``mass_flux/rho`` equals ``c(rho)``.

    This is the minimum of ``pi(rho) + (mass_flux/rho)**2/2``, the point that
    separates the supersonic and subsonic roots of the jump conditions.
    """
    if not (mass_flux > 0.0):
        raise DomainError("mass flux must be positive")
    # c^2 rho^2 = m^2 with c^2 = c_ref^2 (rho/rho_ref)^(gamma-1)
    x = (mass_flux / (gas.c_ref * gas.rho_ref)) ** 2
    return gas.rho_ref * x ** (1.0 / (gas.gamma + 1.0))
