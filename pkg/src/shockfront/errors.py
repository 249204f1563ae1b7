"""Exception hierarchy.

Every domain failure derives from :class:`ShockfrontError` so callers
(and the CLI) can separate "no such physical state" from programming errors.
"""


class ShockfrontError(Exception):
    """Base class for all domain errors raised by the library."""


class DomainError(ShockfrontError, ValueError):
    """Argument outside the domain of a thermodynamic map."""


class VacuumError(ShockfrontError):
    """Requested state lies at or beyond the vacuum bound."""


class OrientationError(ShockfrontError):
    """Shock normal does not point downstream."""


class NoShock(ShockfrontError):
    """No admissible compressive shock exists for the given data."""


class NoIncidentShock(NoShock):
    """The incident shock does not exist for (M_I, gamma)."""


class NoReflectedShock(NoShock):
    """Turning angle exceeds the detachment angle."""


class SubsonicUpstream(ShockfrontError):
    """Upstream pseudo-Mach number is not above one."""


class NoSonicPoint(ShockfrontError):
    """Shock line does not meet the downstream sonic circle."""


class CircleDomainError(ShockfrontError, ValueError):
    """Radius at or inside the upstream sonic circle."""


class UnsupportedBranch(ShockfrontError):
    """Closed form requested where it is not defined (gamma = 1)."""


class ParameterRangeError(ShockfrontError, ValueError):
    """Parameter ranges do not overlap or are empty."""


class BracketError(ShockfrontError):
    """A bracketing sweep found no sign change."""
