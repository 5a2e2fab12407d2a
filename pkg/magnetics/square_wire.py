"""
Closed-form field of an infinitely long square wire carrying a uniform current
along y, centered on (x, z) = (0, 0)
"""
from typing import Tuple

import numpy as np
import scipy.constants as cst

from utilities.errors import DomainError

MU0 = cst.mu_0


def _check_outside(x: np.ndarray, z: np.ndarray, half: float):
    inside = (np.abs(x) <= half) & (np.abs(z) <= half)
    if np.any(inside):
        raise DomainError("Field formulas are valid outside the wire cross-section only")


def _corners(x, z, side):
    half = 0.5 * side
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    _check_outside(x, z, half)
    return x - half, x + half, z - half, z + half


def _log_terms(xm, xp, zm, zp):
    """L1, L2, L3 of the closed form"""
    r_mm = xm * xm + zm * zm
    r_pp = xp * xp + zp * zp
    r_pm = xp * xp + zm * zm
    r_mp = xm * xm + zp * zp
    l1 = np.log(r_mm * r_pp / (r_pm * r_mp))
    l2 = np.log(r_mm * r_pm / (r_mp * r_pp))
    l3 = np.log(r_mm * r_mp / (r_pm * r_pp))
    return l1, l2, l3


def _atan_ratio(num, den):
    # arctan(num/den) with den == 0 mapped to +-pi/2
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.arctan(num / den)


def _angle_terms(xm, xp, zm, zp):
    """A_mm, A_pm, A_mp, A_pp = arctan(x_i / z_j)"""
    return (
        _atan_ratio(xm, zm),
        _atan_ratio(xp, zm),
        _atan_ratio(xm, zp),
        _atan_ratio(xp, zp),
    )


def _u_atan_v_over_u(u, v):
    """u * arctan(v / u), continuous through u = 0"""
    safe = np.where(u == 0.0, 1.0, u)
    return np.where(u == 0.0, 0.0, u * np.arctan(v / safe))


def square_wire_field(x, z, current: float, side: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Field (Bx, Bz) of a square wire by integrating Biot-Savart over its section

    Args:
        x, z: Evaluation point(s) relative to the wire center, m
        current: I, A
        side: c, m

    Returns:
        (Bx, Bz), T
    """
    if side <= 0:
        raise DomainError(f"Wire side must be positive, got {side}")
    xm, xp, zm, zp = _corners(x, z, side)
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    l1, l2, l3 = _log_terms(xm, xp, zm, zp)
    a_mm, a_pm, a_mp, a_pp = _angle_terms(xm, xp, zm, zp)
    scale = MU0 * current / (4.0 * np.pi * side * side)

    bx = -scale * (
        x * l1 - 0.5 * side * l2
        + 2.0 * zm * (a_mm - a_pm) + 2.0 * zp * (a_pp - a_mp)
    )
    # x_i * arctan(z_j / x_i) keeps Bz continuous across the planes z = +-c/2;
    # below the wire it equals the arctan(x_i / z_j) form term by term
    bz = scale * (
        z * l1 - 0.5 * side * l3
        + 2.0 * (_u_atan_v_over_u(xp, zp) - _u_atan_v_over_u(xm, zp)
                 - _u_atan_v_over_u(xp, zm) + _u_atan_v_over_u(xm, zm))
    )
    return bx, bz


def square_wire_gradient(x, z, current: float, side: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vertical derivatives (dBx/dz, dBz/dz) of the square-wire field

    Args:
        x, z: Evaluation point(s) relative to the wire center, m
        current: I, A
        side: c, m

    Returns:
        (dBx_dz, dBz_dz), T/m
    """
    if side <= 0:
        raise DomainError(f"Wire side must be positive, got {side}")
    xm, xp, zm, zp = _corners(x, z, side)
    l1, _, _ = _log_terms(xm, xp, zm, zp)
    a_mm, a_pm, a_mp, a_pp = _angle_terms(xm, xp, zm, zp)
    dbx_dz = MU0 * current / (2.0 * np.pi * side * side) * (a_mp - a_mm + a_pm - a_pp)
    dbz_dz = MU0 * current / (4.0 * np.pi * side * side) * l1
    return dbx_dz, dbz_dz
