"""Numerical Weierstrass functions on a lattice Z + tau*Z.

Evaluation goes through Jacobi theta functions after reducing the argument
to a minimal representative in the fundamental cell; near the pole the
truncated Laurent series takes over.  Derivatives of order two and higher
come from the algebraic recurrences implied by the defining relation, never
from numerical differentiation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath as mp

from .series import wp_series_numeric


class InvalidLatticeError(ValueError):
    pass


class NearPoleError(ValueError):
    pass


_DPS = 30
_SERIES_TERMS = 60


@dataclass(frozen=True)
class Lattice:
    tau: complex
    g2: complex
    g3: complex
    nome: complex                 # e^(2 pi i tau)
    shortest: float               # norm of the shortest nonzero period

    def j(self) -> complex:
        d = self.g2**3 - 27 * self.g3**2
        return 1728 * self.g2**3 / d


def lattice_invariants(tau: complex):
    """(g2, g3) of Z + tau*Z via normalized Eisenstein q-series."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise InvalidLatticeError("tau must have positive imaginary part")
    with mp.workdps(_DPS):
        q = mp.e ** (2j * mp.pi * mp.mpc(tau))
        e4 = mp.mpf(1)
        e6 = mp.mpf(1)
        n = 1
        while True:
            qn = q**n
            if abs(qn) < mp.mpf(10) ** (-_DPS - 5):
                break
            e4 += 240 * n**3 * qn / (1 - qn)
            e6 -= 504 * n**5 * qn / (1 - qn)
            n += 1
            if n > 4000:
                break
        g2 = 4 * mp.pi**4 / 3 * e4
        g3 = 8 * mp.pi**6 / 27 * e6
        return complex(g2), complex(g3)


def make_lattice(tau: complex) -> Lattice:
    tau = complex(tau)
    g2, g3 = lattice_invariants(tau)
    shortest = min(
        abs(m + n * tau)
        for m in range(-2, 3)
        for n in range(-2, 3)
        if (m, n) != (0, 0)
    )
    return Lattice(tau, g2, g3, cmath.exp(2j * cmath.pi * tau), shortest)


HEX_TAU = complex(-0.5, math.sqrt(3) / 2)  # the hexagonal (equianharmonic) cell


def reduce_to_cell(z: complex, lat: Lattice) -> complex:
    """Minimal-norm representative of z modulo the lattice."""
    z = complex(z)
    tau = lat.tau
    b = z.imag / tau.imag
    a = z.real - b * tau.real
    z0 = z - round(a) - round(b) * tau
    best = z0
    for m in (-1, 0, 1):
        for n in (-1, 0, 1):
            cand = z0 - m - n * tau
            if abs(cand) < abs(best):
                best = cand
    return best


def _wp01_theta(z: complex, lat: Lattice):
    """(wp, wp') by theta quotients; z already reduced, away from 0."""
    with mp.workdps(_DPS):
        p = mp.e ** (1j * mp.pi * mp.mpc(lat.tau))
        v = mp.pi * mp.mpc(z)
        t0 = mp.jtheta(1, v, p)
        t1 = mp.jtheta(1, v, p, 1)
        t2 = mp.jtheta(1, v, p, 2)
        t3 = mp.jtheta(1, v, p, 3)
        d1 = mp.jtheta(1, 0, p, 1)
        d3 = mp.jtheta(1, 0, p, 3)
        r1 = t1 / t0
        wp = -mp.pi**2 * (t2 / t0 - r1**2) + mp.pi**2 * d3 / (3 * d1)
        wpp = -mp.pi**3 * (t3 / t0 - 3 * r1 * t2 / t0 + 2 * r1**3)
        return complex(wp), complex(wpp)


def _wp01_series(z: complex, lat: Lattice):
    coeffs = wp_series_numeric(_SERIES_TERMS, lat.g2, lat.g3)
    wp = 0j
    wpp = 0j
    for k, c in coeffs.items():
        zk = z**k
        wp += c * zk
        wpp += k * c * zk / z
    return wp, wpp


def wp_eval(z: complex, lat: Lattice, d: int = 0) -> complex:
    """wp^(d)(z) for 0 <= d <= 5, absolute accuracy about 1e-10."""
    if not 0 <= d <= 5:
        raise ValueError("derivative order must be 0..5")
    z0 = reduce_to_cell(z, lat)
    if abs(z0) < 1e-8:
        raise NearPoleError(f"z is within 1e-8 of a lattice point: {z}")
    if abs(z0) < 0.1 * lat.shortest:
        wp, wpp = _wp01_series(z0, lat)
    else:
        wp, wpp = _wp01_theta(z0, lat)
    return _from_wp01(wp, wpp, lat.g2, d)


def _from_wp01(wp: complex, wpp: complex, g2: complex, d: int) -> complex:
    if d == 0:
        return wp
    if d == 1:
        return wpp
    w2 = 6 * wp**2 - g2 / 2
    if d == 2:
        return w2
    if d == 3:
        return 12 * wp * wpp
    if d == 4:
        return 12 * wpp**2 + 12 * wp * w2
    return 36 * wpp * w2 + 12 * wp * (12 * wp * wpp)


# -- degenerate kernels ------------------------------------------------------


def rational_kernel(z: complex, d: int = 0) -> complex:
    """d-th derivative of 1/z^2 (lattice degenerated to a point)."""
    return (-1) ** d * math.factorial(d + 1) / z ** (d + 2)


def trigonometric_kernel(z: complex, d: int = 0) -> complex:
    """d-th derivative of 1/sin(z)^2 (lattice degenerated to Z*pi ... one
    period sent to infinity); computed through cot-polynomials, exactly."""
    # 1/sin^2 = 1 + u^2 with u = cot z, u' = -(1 + u^2)
    poly = [1.0, 0.0, 1.0]  # coefficients in u, low to high
    for _ in range(d):
        deriv = [0.0] * (len(poly) + 1)
        for k, ck in enumerate(poly):
            if k == 0 or ck == 0:
                continue
            # d/dz c u^k = -k c (u^(k-1) + u^(k+1))
            deriv[k - 1] -= k * ck
            deriv[k + 1] -= k * ck
        poly = deriv
    u = 1 / cmath.tan(z)
    return sum(ck * u**k for k, ck in enumerate(poly) if ck)
