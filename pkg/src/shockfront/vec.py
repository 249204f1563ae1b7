"""Small 2-vector helpers on numpy arrays."""
import math

import numpy as np


def vec(x, y=None) -> np.ndarray:
    if y is None:
        x, y = x
    return np.array([float(x), float(y)])


def norm(a) -> float:
    return math.hypot(a[0], a[1])


def unit(a) -> np.ndarray:
    r = norm(a)
    if r == 0.0:
        raise ValueError("zero vector has no direction")
    return np.array([a[0] / r, a[1] / r])


def rot90(a) -> np.ndarray:
    """Rotate counterclockwise by 90 degrees."""
    return np.array([-a[1], a[0]])


def rotate(a, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([c * a[0] - s * a[1], s * a[0] + c * a[1]])


def dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b) -> float:
    return a[0] * b[1] - a[1] * b[0]


def angle_from(a, b) -> float:
    """Signed counterclockwise angle from ``a`` to ``b`` in (-pi, pi]."""
    return math.atan2(cross(a, b), dot(a, b))


def polar_angle(a) -> float:
    return math.atan2(a[1], a[0])
