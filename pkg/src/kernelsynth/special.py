"""Special functions needed by the synthesized kernels.

Only what the radial profiles and the Sobolev tail need: the normalized
Schoenberg profiles ``Gamma(d/2) (2/z)^nu J_nu(z)`` with ``nu = (d-2)/2`` and
the oscillatory tail integrals ``int_R^inf w^-p cos(c w) dw``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import jv, sici

SERIES_SWITCH = 12.0
TAYLOR_SWITCH = 1e-6
# Above this order the trigonometric recurrence and the Hankel expansion both
# degrade on z in [12, nu]; scipy's jv covers that range.
MAX_OWN_ORDER = 10.0


def _sinc_taylor(z):
    z2 = z * z
    return 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0


def sinc(z):
    """``sin(z)/z`` with the removable singularity at 0 filled in."""
    z = np.asarray(z, dtype=np.float64)
    small = np.abs(z) < TAYLOR_SWITCH
    safe = np.where(small, 1.0, z)
    return np.where(small, _sinc_taylor(z), np.sin(safe) / safe)


def _profile_series(nu, z, terms=80):
    # Gamma(nu+1) sum_k (-1)^k (z/2)^{2k} / (k! Gamma(k+nu+1))
    q = -(0.5 * z) ** 2
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(1, terms):
        term = term * q / (k * (k + nu))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _hankel_bessel(nu, z):
    """J_nu(z) from the Hankel asymptotic expansion (large z)."""
    mu = 4.0 * nu * nu
    chi = z - (0.5 * nu + 0.25) * math.pi
    P = np.ones_like(z)
    Q = np.zeros_like(z)
    a = np.ones_like(z)  # a_k(nu) / z^k, carried with sign
    prev = np.full_like(z, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, 60):
        a = a * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        mag = np.abs(a)
        active &= mag < prev
        if not np.any(active):
            break
        contrib = np.where(active, a, 0.0)
        if k % 2:
            Q = Q + contrib * (-1) ** (k // 2)
        else:
            P = P + contrib * (-1) ** (k // 2)
        prev = np.where(active, mag, prev)
    return np.sqrt(2.0 / (math.pi * z)) * (P * np.cos(chi) - Q * np.sin(chi))


def _half_integer_bessel(nu, z):
    """J_nu(z) for half-integer ``nu >= -1/2`` by upward recurrence (z > 0)."""
    root = np.sqrt(2.0 / (math.pi * z))
    j_prev = root * np.cos(z)  # J_{-1/2}
    j_cur = root * np.sin(z)   # J_{1/2}
    if nu == -0.5:
        return j_prev
    order = 0.5
    while order < nu:
        j_prev, j_cur = j_cur, (2.0 * order / z) * j_cur - j_prev
        order += 1.0
    return j_cur


def schoenberg_profile(d: int, z) -> np.ndarray:
    """Normalized Schoenberg basis profile for ``R^d``, equal to 1 at ``z = 0``.

    ``d = 1`` gives ``cos z``, ``d = 2`` gives ``J_0(z)``, ``d = 3`` gives
    ``sin(z)/z``.
    """
    z = np.asarray(z, dtype=np.float64)
    if d == 1:
        return np.cos(z)
    if d == 3:
        return sinc(z)
    nu = 0.5 * (d - 2)
    out = np.empty_like(z)
    small = z < SERIES_SWITCH
    out[small] = _profile_series(nu, z[small])
    big = ~small
    if np.any(big):
        zb = z[big]
        if nu > MAX_OWN_ORDER:
            jb = jv(nu, zb)
        elif d % 2:
            jb = _half_integer_bessel(nu, zb)
        else:
            jb = _hankel_bessel(nu, zb)
        out[big] = math.gamma(0.5 * d) * (2.0 / zb) ** nu * jb
    return out


def bessel_j(nu: float, z) -> np.ndarray:
    """``J_nu(z)`` for ``z > 0`` and ``nu = (d-2)/2``, via the profile."""
    z = np.asarray(z, dtype=np.float64)
    d = int(round(2 * nu + 2))
    return schoenberg_profile(d, z) * (0.5 * z) ** nu / math.gamma(nu + 1.0)


CONTINUED_FRACTION_SWITCH = 2.0


def _expint_cf(p: int, z: np.ndarray, max_iter: int = 5000) -> np.ndarray:
    """Generalized exponential integral ``E_p(z)`` by its continued fraction
    (modified Lentz); accurate for ``|z|`` above about 1 off the negative axis."""
    tiny = 1e-300
    b = z + p
    c = np.full_like(z, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, max_iter + 1):
        an = -i * (p - 1 + i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = h * delta
        # the update factor settles within a few ulps of 1, never exactly on it
        if np.all(np.abs(delta - 1.0) < 4 * np.finfo(float).eps):
            break
    return h * np.exp(-z)


def cosine_power_tail(p: int, c, R: float) -> np.ndarray:
    """``int_R^inf w^(-p) cos(c w) dw`` for integer ``p >= 2``, ``c >= 0``.

    Equals ``Re(R^(1-p) E_p(-i c R))``.  For ``c R >= 2`` the exponential
    integral is evaluated by continued fraction; below that an upward
    recurrence seeded with the sine/cosine integrals is used (its error
    growth is bounded by ``(c R)^p``).
    """
    if p < 2:
        raise ValueError("p must be at least 2")
    c = np.abs(np.asarray(c, dtype=np.float64))
    out = np.empty_like(c)
    zero = c == 0
    out[zero] = R ** (1 - p) / (p - 1)
    far = (c * R >= CONTINUED_FRACTION_SWITCH) & ~zero
    near = ~far & ~zero

    if np.any(far):
        z = -1j * c[far] * R
        out[far] = (R ** (1 - p) * _expint_cf(p, z)).real

    if np.any(near):
        cn = c[near]
        si, ci = sici(cn * R)
        I = -ci
        J = 0.5 * math.pi - si
        cos_cr = np.cos(cn * R)
        sin_cr = np.sin(cn * R)
        for q in range(1, p):
            I, J = (R ** (-q) * cos_cr / q - (cn / q) * J,
                    R ** (-q) * sin_cr / q + (cn / q) * I)
        out[near] = I
    return out
