"""Numerical monodromy oracle.

Independent check of trivial monodromy: write (L - lambda) psi = 0 as a
first order companion system, integrate a fundamental matrix once around a
small circle enclosing the pole, and measure the distance of the result
from the identity.  Coefficients come from the lattice evaluator, which
switches to the truncated Laurent series automatically inside its safe disk,
so the circle never sees evaluator blow-up.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .lattice import Lattice, wp_eval
from .operators import GlobalEllipticOperator
from .series import wp_series_numeric

DEFAULT_LAMBDAS = (1 + 0j, -2 + 1j, 5j)

_SERIES_TERMS = 80
_SAFE_FACTOR = 0.35              # series truncation error ~ (0.35)^80 here


class PathError(RuntimeError):
    """Integration failed along the loop (step-size collapse)."""


@dataclass
class MonodromyReport:
    matrix: np.ndarray
    deviation: float
    determinant: complex
    lam: complex
    path: tuple                  # (center, radius)

    def to_json(self) -> str:
        def f(x):
            return float(f"{x:.15g}")

        def pair(v):
            return [f(v.real), f(v.imag)]

        return json.dumps({
            "matrix": [[pair(v) for v in row] for row in self.matrix.tolist()],
            "deviation": f(self.deviation),
            "determinant": pair(self.determinant),
            "lambda": pair(self.lam),
            "path": {
                "center": pair(complex(self.path[0])),
                "radius": f(self.path[1]),
            },
        })


def elliptic_evaluator(op: GlobalEllipticOperator, values: dict, lat: Lattice):
    """Numeric coefficient evaluator z -> [c_0, ..., c_{n-1}] for the monic
    operator psi^(n) + sum c_k(z) psi^(k); symbolic parameters are fixed by
    the values mapping, g2/g3 default to the lattice invariants."""
    n = op.n
    vals = dict(values)
    vals.setdefault("g2", lat.g2)
    vals.setdefault("g3", lat.g3)
    data = {}
    for i, elem in op.coeffs.items():
        p0 = [c.evaluate(vals) for c in elem.part0]
        p1 = [c.evaluate(vals) for c in elem.part1]
        if p0 or p1:
            data[n - i] = (p0, p1)

    safe = _SAFE_FACTOR * lat.shortest
    series = {k: _coeff_series(p0, p1, lat) for k, (p0, p1) in data.items()}

    def coeffs(z: complex):
        out = [0j] * n
        if abs(z) < safe:
            for k, (low, cs) in series.items():
                acc = 0j
                for a in reversed(cs):
                    acc = acc * z + a
                out[k] = acc * z**low
            return out
        w = wp_eval(z, lat, 0)
        w1 = wp_eval(z, lat, 1)
        for k, (p0, p1) in data.items():
            v = 0j
            for a in reversed(p0):
                v = v * w + a
            u = 0j
            for a in reversed(p1):
                u = u * w + a
            out[k] = v + u * w1
        return out

    return coeffs


def _wp_numeric_series(lat: Lattice):
    """(low, coefficient list) Laurent data of wp around 0, cached per call."""
    d = wp_series_numeric(_SERIES_TERMS, lat.g2, lat.g3)
    hi = max(d)
    cs = [d.get(k, 0j) for k in range(-2, hi + 1)]
    return -2, cs


def _ser_mul(a, b, cut: int):
    la, ca = a
    lb, cb = b
    low = la + lb
    out = [0j] * min(len(ca) + len(cb) - 1, cut - low)
    for i, x in enumerate(ca):
        if not x:
            continue
        for j, y in enumerate(cb):
            if i + j >= len(out):
                break
            out[i + j] += x * y
    return low, out


def _ser_axpy(acc, s, scale):
    low_s, cs = s
    low, out = acc
    if not out:
        return (low_s, [v * scale for v in cs])
    new_low = min(low, low_s)
    hi = max(low + len(out), low_s + len(cs))
    merged = [0j] * (hi - new_low)
    for i, v in enumerate(out):
        merged[low - new_low + i] += v
    for i, v in enumerate(cs):
        merged[low_s - new_low + i] += v * scale
    return new_low, merged


def _coeff_series(p0, p1, lat: Lattice):
    """Numeric Laurent series of sum p0[i] wp^i + sum p1[i] wp^i wp'."""
    cut = _SERIES_TERMS - 2
    wp = _wp_numeric_series(lat)
    lw, cw = wp
    wp1 = (lw - 1, [k * c for k, c in zip(range(lw, lw + len(cw)), cw)])
    acc = (0, [])
    power = (0, [1 + 0j])
    for i in range(max(len(p0), len(p1))):
        if i:
            power = _ser_mul(power, wp, cut)
        if i < len(p0) and p0[i]:
            acc = _ser_axpy(acc, power, p0[i])
        if i < len(p1) and p1[i]:
            acc = _ser_axpy(acc, _ser_mul(power, wp1, cut), p1[i])
    return acc


def monodromy_matrix(evaluator, n: int, center: complex, radius: float,
                     lam: complex, tol: float = 1e-12) -> MonodromyReport:
    """Fundamental matrix around the circle |z - center| = radius.

    Columns start as the identity at the base point center + radius; the
    loop runs counterclockwise once.  deviation is the max-norm distance of
    the result from the identity.
    """
    center = complex(center)
    lam = complex(lam)

    def rhs(theta, y):
        z = center + radius * np.exp(1j * theta)
        dz = 1j * radius * np.exp(1j * theta)
        Y = y.reshape(n, n)
        c = evaluator(z)
        dY = np.empty_like(Y)
        dY[:-1] = Y[1:]
        top = lam * Y[0]
        for k in range(n):
            ck = c[k]
            if ck:
                top = top - ck * Y[k]
        dY[-1] = top
        return (dz * dY).reshape(-1)

    y0 = np.eye(n, dtype=complex).reshape(-1)
    sol = solve_ivp(rhs, (0.0, 2 * np.pi), y0, method="DOP853",
                    rtol=tol, atol=tol)
    if not sol.success:
        raise PathError(f"loop integration failed: {sol.message}")
    # rows of Y carry derivative orders, columns the transported solutions;
    # the start basis is the identity in those coordinates
    Mfull = sol.y[:, -1].reshape(n, n)
    dev = float(np.max(np.abs(Mfull - np.eye(n))))
    det = complex(np.linalg.det(Mfull))
    return MonodromyReport(Mfull, dev, det, lam, (center, radius))


def integrability_verdict(evaluator, n: int, radius: float,
                          lambdas=None, tol: float = 1e-12,
                          center: complex = 0j):
    """(verdict, reports): trivial iff every deviation < 10*tol, nontrivial
    iff any deviation > 1e3*tol, inconclusive in between."""
    if lambdas is None:
        lambdas = DEFAULT_LAMBDAS
    lambdas = [complex(v) for v in lambdas]
    if len(lambdas) < 3:
        raise ValueError("need at least 3 spectral samples")
    reports = [monodromy_matrix(evaluator, n, center, radius, lam, tol)
               for lam in lambdas]
    devs = [r.deviation for r in reports]
    if all(d < 10 * tol for d in devs):
        verdict = "trivial"
    elif any(d > 1e3 * tol for d in devs):
        verdict = "nontrivial"
    else:
        verdict = "inconclusive"
    return verdict, reports


def verdict_json(verdict: str, reports) -> str:
    return json.dumps({
        "verdict": verdict,
        "reports": [json.loads(r.to_json()) for r in reports],
    })
