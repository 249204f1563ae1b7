"""Process-wide numerical tolerances."""
from __future__ import annotations

import os

DEFAULT_ROOT_TOL = 1e-13
TOL_RANGE = (1e-14, 1e-4)
ENV_VAR = "SHOCKFRONT_TOL"

_root_tol = DEFAULT_ROOT_TOL


def check_tol(value: float) -> float:
    lo, hi = TOL_RANGE
    if not (lo <= value <= hi):
        raise ValueError(f"tolerance {value!r} outside [{lo:g}, {hi:g}]")
    return value


def root_tol() -> float:
    """Absolute tolerance used by the scalar root finders."""
    return _root_tol


def set_root_tol(value: float | None) -> None:
    """Override the root tolerance; ``None`` restores the default."""
    global _root_tol
    _root_tol = DEFAULT_ROOT_TOL if value is None else check_tol(float(value))


def root_tol_from_env(environ=None) -> float | None:
    raw = (os.environ if environ is None else environ).get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return None
    return check_tol(float(raw))
