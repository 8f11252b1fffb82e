"""
Closed forms for concentric annuli in the plane.

For the ring B_R minus B_r with u = 0 on |x| = R and u = 1 on |x| = r the
p-harmonic potential is radial: with g = (p - 2)/(p - 1),

    p = 2:   u(s) = log(R/s) / log(R/r)
    p != 2:  u(s) = (R^g - s^g) / (R^g - r^g)

These give the level radii used as ring initial guesses and the oracles the
tests compare against.
"""

import math
from typing import Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar


def _exponent(p: float) -> float:
    if p <= 1:
        raise ValueError(f"p must be > 1, got {p}")
    return (p - 2.0) / (p - 1.0)


def level_radius(t, r_out: float, r_in: float, p: float) -> np.ndarray:
    """Radius of the level set {u = t}, t in [0, 1]."""
    if not 0 < r_in < r_out:
        raise ValueError(f"Need 0 < r_in < r_out, got r_in={r_in}, r_out={r_out}")
    t = np.asarray(t, dtype=float)
    g = _exponent(p)
    if abs(g) < 1e-14:
        return r_out * (r_in / r_out)**t
    return (r_out**g - t * (r_out**g - r_in**g))**(1.0 / g)


def gradient(s, r_out: float, r_in: float, p: float) -> np.ndarray:
    """|u'(s)| of the annulus potential at radius s."""
    s = np.asarray(s, dtype=float)
    g = _exponent(p)
    if abs(g) < 1e-14:
        return 1.0 / (s * math.log(r_out / r_in))
    return abs(g) * s**(g - 1.0) / abs(r_out**g - r_in**g)


def outer_gradient(r_out: float, r_in: float, p: float) -> float:
    return float(gradient(r_out, r_out, r_in, p))


def inner_gradient(r_out: float, r_in: float, p: float) -> float:
    return float(gradient(r_in, r_out, r_in, p))


def exterior_radius(r_in: float, tau: float, p: float) -> float:
    """Outer radius R with |Du| = tau on |x| = R for the annulus over B_{r_in}."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    lo = r_in * (1.0 + 1e-9)
    hi = 2.0 * r_in
    while outer_gradient(hi, r_in, p) > tau:
        hi *= 2.0
        if hi > 1e12 * r_in:
            raise ValueError(f"No exterior radius found for tau={tau}")
    f = lambda R: outer_gradient(R, r_in, p) - tau
    return float(brentq(f, lo, hi, xtol=1e-14 * r_in, rtol=1e-14))


def critical_inner_radius(r_out: float, p: float) -> Tuple[float, float]:
    """
    Inner radius minimising the inner-boundary gradient, with that minimum.

    The minimum equals the Bernoulli constant of the disk B_{r_out}.
    """
    g = _exponent(p)
    if abs(g) < 1e-14:
        return r_out / math.e, math.e / r_out
    res = minimize_scalar(
        lambda rho: inner_gradient(r_out, rho * r_out, p),
        bounds=(1e-9, 1.0 - 1e-9),
        method="bounded",
        options={"xatol": 1e-12},
    )
    rho = float(res.x) * r_out
    return rho, inner_gradient(r_out, rho, p)


def interior_radii(r_out: float, tau: float, p: float) -> Tuple[float, float]:
    """
    Both inner radii rho with inner gradient tau for the disk B_{r_out}.

    Returns (small, large); the large root is the maximal solution.
    Raises ValueError when tau is below the Bernoulli constant of the disk.
    """
    rho_c, g_min = critical_inner_radius(r_out, p)
    if tau < g_min:
        raise ValueError(f"tau={tau} is below the disk constant {g_min}")
    if tau == g_min:
        return rho_c, rho_c
    f = lambda rho: inner_gradient(r_out, rho, p) - tau
    large = brentq(f, rho_c, r_out * (1.0 - 1e-12), xtol=1e-15 * r_out)
    tiny = rho_c
    while f(tiny) < 0:
        tiny *= 0.5
    small = brentq(f, tiny, rho_c, xtol=1e-15 * r_out)
    return float(small), float(large)
