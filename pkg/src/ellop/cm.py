"""Many-body layer: pole configurations whose operators are finite-gap.

Second order multi-pole operators lead to the residual system of odd
derivative sums; third order ones to critical points of a cubic Hamiltonian
F + c*H1; the Z3-symmetric third order family to critical points of the
crystallographic Hamiltonian on the hexagonal lattice.  A damped Newton
solver locates critical points numerically.

All evaluators accept either a Lattice or a bare kernel(z, d) callable, so
the rational (1/z^2) and trigonometric (1/sin^2) degenerations reuse the
same residual code.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .lattice import (
    HEX_TAU,
    InvalidLatticeError,
    Lattice,
    NearPoleError,
    lattice_invariants,
    make_lattice,
    rational_kernel,
    reduce_to_cell,
    trigonometric_kernel,
    wp_eval,
)

__all__ = [
    "InvalidConfigurationError",
    "CMConfig2",
    "CMConfig3",
    "Cryst3Config",
    "finite_gap_residuals",
    "cm3_residuals",
    "cm3_F",
    "cm3_H1",
    "cryst3_residuals",
    "cryst3_grad_H",
    "cryst3_H",
    "hexagonal_fold_residual",
    "inozemtsev_U",
    "inozemtsev_gradient",
    "NewtonResult",
    "newton_critical",
    "wp_kernel",
    "hexagonal_lattice",
    "Lattice",
    "lattice_invariants",
    "make_lattice",
    "wp_eval",
    "rational_kernel",
    "trigonometric_kernel",
    "InvalidLatticeError",
    "NearPoleError",
]


class InvalidConfigurationError(ValueError):
    pass


_COLLISION_TOL = 1e-8


def wp_kernel(lat: Lattice):
    """Evaluator kernel(z, d) = wp^(d)(z) bound to a lattice."""

    def kernel(z: complex, d: int = 0) -> complex:
        return wp_eval(z, lat, d)

    return kernel


def _as_kernel(ev):
    if isinstance(ev, Lattice):
        return wp_kernel(ev)
    if callable(ev):
        return ev
    raise TypeError("expected a Lattice or a kernel callable")


def _near_lattice(z: complex, lat: Lattice | None) -> bool:
    if lat is None:
        return abs(z) < _COLLISION_TOL
    return abs(reduce_to_cell(z, lat)) < _COLLISION_TOL


def _check_distinct(points, lat, what="points"):
    for i in range(len(points)):
        if _near_lattice(points[i], lat):
            raise InvalidConfigurationError(f"{what}[{i}] sits on a pole of the kernel")
        for j in range(i):
            if _near_lattice(points[i] - points[j], lat):
                raise InvalidConfigurationError(
                    f"{what}[{i}] and {what}[{j}] coincide modulo the lattice"
                )


@dataclass(frozen=True)
class CMConfig2:
    """Pole positions and multiplicities of a second order candidate."""

    points: tuple
    multiplicities: tuple

    def __init__(self, points, multiplicities):
        points = tuple(complex(z) for z in points)
        mult = tuple(int(m) for m in multiplicities)
        if len(points) != len(mult):
            raise InvalidConfigurationError("points and multiplicities differ in length")
        if any(m < 0 for m in mult):
            raise InvalidConfigurationError("multiplicities must be nonnegative")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "multiplicities", mult)

    def validate(self, lat: Lattice | None = None):
        _check_distinct(self.points, lat)


def finite_gap_residuals(cfg: CMConfig2, ev) -> list:
    """Residuals sum_{j != i} m_j (m_j + 1) wp^(2s-1)(z_i - z_j), s = 1..m_i.

    All residuals vanish iff the configuration carries a finite-gap second
    order operator.  Flat list ordered by pole index, then s.
    """
    lat = ev if isinstance(ev, Lattice) else None
    cfg.validate(lat)
    kernel = _as_kernel(ev)
    zs, ms = cfg.points, cfg.multiplicities
    out = []
    for i, mi in enumerate(ms):
        for s in range(1, mi + 1):
            acc = 0j
            for j, mj in enumerate(ms):
                if j == i:
                    continue
                acc += mj * (mj + 1) * kernel(zs[i] - zs[j], 2 * s - 1)
            out.append(acc)
    return out


@dataclass(frozen=True)
class CMConfig3:
    """Positions, momenta and the coupling constant of the cubic system."""

    points: tuple
    momenta: tuple
    c: complex

    def __init__(self, points, momenta, c):
        points = tuple(complex(z) for z in points)
        momenta = tuple(complex(p) for p in momenta)
        if len(points) != len(momenta):
            raise InvalidConfigurationError("points and momenta differ in length")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "momenta", momenta)
        object.__setattr__(self, "c", complex(c))

    def validate(self, lat: Lattice | None = None):
        _check_distinct(self.points, lat)


def cm3_residuals(cfg: CMConfig3, ev) -> list:
    """Critical-point residuals of F + c*H1.

    First N entries: c + 3 p_i^2 - 3 sum_{j != i} wp(z_i - z_j), which is
    d(F + c*H1)/dp_i.  Last N entries: 3 sum_{j != i} (p_i + p_j)
    wp'(z_i - z_j), which is -d(F + c*H1)/dz_i.
    """
    lat = ev if isinstance(ev, Lattice) else None
    cfg.validate(lat)
    kernel = _as_kernel(ev)
    zs, ps, c = cfg.points, cfg.momenta, cfg.c
    n = len(zs)
    fam_p = []
    fam_z = []
    for i in range(n):
        sp = 0j
        sz = 0j
        for j in range(n):
            if j == i:
                continue
            d = zs[i] - zs[j]
            sp += kernel(d, 0)
            sz += (ps[i] + ps[j]) * kernel(d, 1)
        fam_p.append(c + 3 * ps[i] ** 2 - 3 * sp)
        fam_z.append(3 * sz)
    return fam_p + fam_z


def cm3_F(cfg: CMConfig3, ev) -> complex:
    """F = sum p_i^3 - (3/2) sum_{i != j} (p_i + p_j) wp(z_i - z_j)."""
    lat = ev if isinstance(ev, Lattice) else None
    cfg.validate(lat)
    kernel = _as_kernel(ev)
    zs, ps = cfg.points, cfg.momenta
    n = len(zs)
    val = sum(p**3 for p in ps)
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            val -= 1.5 * (ps[i] + ps[j]) * kernel(zs[i] - zs[j], 0)
    return val


def cm3_H1(cfg: CMConfig3) -> complex:
    return sum(cfg.momenta)


# -- crystallographic order 3 on the hexagonal lattice ------------------------

_EPS = cmath.exp(2j * cmath.pi / 3)
ETA = (0j, complex(0, 3 ** -0.5), complex(0, -(3 ** -0.5)))

_HEX_CACHE: list = []


def hexagonal_lattice() -> Lattice:
    """The tau = e^{2 pi i/3} cell carrying the Z3 symmetry; g2 = 0."""
    if not _HEX_CACHE:
        _HEX_CACHE.append(make_lattice(HEX_TAU))
    return _HEX_CACHE[0]


def hexagonal_fold_residual(z: complex) -> complex:
    """wp((1-eps)z) + (1/(3 eps)) (wp(z) + wp(z-eta1) + wp(z-eta2)).

    Zero (to evaluator accuracy) for every z: the identity that folds the
    self-orbit interaction into the fixed-point terms.
    """
    lat = hexagonal_lattice()
    folded = wp_eval((1 - _EPS) * z, lat)
    spread = sum(wp_eval(z - eta, lat) for eta in ETA)
    return folded + spread / (3 * _EPS)


@dataclass(frozen=True)
class Cryst3Config:
    """Z3-symmetric third order data: orbit representatives z_i, momenta p_i,
    fixed-point parameters alpha_r, beta_r (r = 0, 1, 2)."""

    points: tuple
    momenta: tuple
    alphas: tuple
    betas: tuple

    def __init__(self, points, momenta, alphas, betas):
        points = tuple(complex(z) for z in points)
        momenta = tuple(complex(p) for p in momenta)
        alphas = tuple(complex(a) for a in alphas)
        betas = tuple(complex(b) for b in betas)
        if len(points) != len(momenta):
            raise InvalidConfigurationError("points and momenta differ in length")
        if len(alphas) != 3 or len(betas) != 3:
            raise InvalidConfigurationError("need alpha_r, beta_r for r = 0, 1, 2")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "momenta", momenta)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", betas)

    @property
    def A(self):
        return tuple(a - 1 for a in self.alphas)

    @property
    def B(self):
        return tuple(a / 2 - b for a, b in zip(self.alphas, self.betas))

    C = 1.0

    def validate(self):
        lat = hexagonal_lattice()
        zs = self.points
        for i, z in enumerate(zs):
            for eta in ETA:
                if _near_lattice(z - eta, lat):
                    raise InvalidConfigurationError(
                        f"points[{i}] hits a fixed point of the Z3 action"
                    )
        # whole orbits must stay apart, including a point from its own images
        for i in range(len(zs)):
            for s in (1, 2):
                if _near_lattice(zs[i] - _EPS**s * zs[i], lat):
                    raise InvalidConfigurationError(
                        f"points[{i}] collides with its own Z3 image"
                    )
            for j in range(i):
                for s in (0, 1, 2):
                    if _near_lattice(zs[i] - _EPS**s * zs[j], lat):
                        raise InvalidConfigurationError(
                            f"points[{i}] and points[{j}] share a Z3 orbit"
                        )


def cryst3_residuals(cfg: Cryst3Config) -> list:
    """Integrability conditions of the Z3-symmetric third order operator.

    First N entries: 3 p_i^2 - 3 sum_{j != i, s} wp(z_i - eps^s z_j)
    + sum_r (alpha_r - 1) wp(z_i - eta_r).  Last N entries:
    sum_r ((alpha_r - 1) wp'(z_i - eta_r) p_i + (alpha_r/2 - beta_r)
    wp''(z_i - eta_r)) - 3 sum_{j != i, s} wp'(z_i - eps^s z_j)
    (p_i + eps^{-s} p_j).
    """
    cfg.validate()
    lat = hexagonal_lattice()
    zs, ps = cfg.points, cfg.momenta
    A, B = cfg.A, cfg.B
    n = len(zs)
    fam_p = []
    fam_z = []
    for i in range(n):
        orbit0 = 0j
        orbit1 = 0j
        for j in range(n):
            if j == i:
                continue
            for s in range(3):
                d = zs[i] - _EPS**s * zs[j]
                orbit0 += wp_eval(d, lat, 0)
                orbit1 += wp_eval(d, lat, 1) * (ps[i] + _EPS ** (-s) * ps[j])
        fixed0 = sum(A[r] * wp_eval(zs[i] - ETA[r], lat, 0) for r in range(3))
        fixed1 = sum(
            A[r] * wp_eval(zs[i] - ETA[r], lat, 1) * ps[i]
            + B[r] * wp_eval(zs[i] - ETA[r], lat, 2)
            for r in range(3)
        )
        fam_p.append(3 * ps[i] ** 2 - 3 * orbit0 + fixed0)
        fam_z.append(fixed1 - 3 * orbit1)
    return fam_p + fam_z


def cryst3_H(cfg: Cryst3Config) -> complex:
    """H = sum p_i^3 + sum_{i,r} (A_r wp(z_i - eta_r) p_i + B_r wp'(z_i -
    eta_r)) - 3C sum_{i != j, s} wp(z_i - eps^s z_j) p_i."""
    cfg.validate()
    lat = hexagonal_lattice()
    zs, ps = cfg.points, cfg.momenta
    A, B = cfg.A, cfg.B
    n = len(zs)
    val = sum(p**3 for p in ps)
    for i in range(n):
        for r in range(3):
            val += A[r] * wp_eval(zs[i] - ETA[r], lat, 0) * ps[i]
            val += B[r] * wp_eval(zs[i] - ETA[r], lat, 1)
        for j in range(n):
            if j == i:
                continue
            for s in range(3):
                val -= 3 * cfg.C * wp_eval(zs[i] - _EPS**s * zs[j], lat, 0) * ps[i]
    return val


def cryst3_grad_H(cfg: Cryst3Config) -> list:
    """(dH/dp_i, dH/dz_i), differentiating H termwise by the chain rule.

    The z_j - eps^s z_i interactions are differentiated in place (chain
    factor -eps^s), without folding them back through the lattice symmetry,
    so agreement with cryst3_residuals is a genuine numerical check of the
    Z3 homogeneity of wp on this cell.
    """
    cfg.validate()
    lat = hexagonal_lattice()
    zs, ps = cfg.points, cfg.momenta
    A, B = cfg.A, cfg.B
    n = len(zs)
    grad_p = []
    grad_z = []
    for i in range(n):
        gp = 3 * ps[i] ** 2
        gz = 0j
        for r in range(3):
            gp += A[r] * wp_eval(zs[i] - ETA[r], lat, 0)
            gz += A[r] * wp_eval(zs[i] - ETA[r], lat, 1) * ps[i]
            gz += B[r] * wp_eval(zs[i] - ETA[r], lat, 2)
        for j in range(n):
            if j == i:
                continue
            for s in range(3):
                gp -= 3 * cfg.C * wp_eval(zs[i] - _EPS**s * zs[j], lat, 0)
                gz -= 3 * cfg.C * wp_eval(zs[i] - _EPS**s * zs[j], lat, 1) * ps[i]
                # term wp(z_j - eps^s z_i) p_j differentiated in z_i
                gz -= 3 * cfg.C * (-(_EPS**s)) * wp_eval(
                    zs[j] - _EPS**s * zs[i], lat, 1
                ) * ps[j]
        grad_p.append(gp)
        grad_z.append(gz)
    return grad_p + grad_z


# -- Inozemtsev potential ------------------------------------------------------


def _half_periods(lat: Lattice):
    return (0j, 0.5 + 0j, lat.tau / 2, (1 + lat.tau) / 2)


def inozemtsev_U(points, ms, lat: Lattice) -> complex:
    """U = sum_{i,j} (m_i + 1/2)^2 wp(z_j - w_i)
    + sum_{k != j} (wp(z_j - z_k) + wp(z_j + z_k))."""
    zs = [complex(z) for z in points]
    ms = [complex(m) for m in ms]
    if len(ms) != 4:
        raise InvalidConfigurationError("need the four parameters m0..m3")
    ws = _half_periods(lat)
    _validate_inozemtsev(zs, ws, lat)
    val = 0j
    for z in zs:
        for mi, w in zip(ms, ws):
            val += (mi + 0.5) ** 2 * wp_eval(z - w, lat, 0)
    for j in range(len(zs)):
        for k in range(len(zs)):
            if k == j:
                continue
            val += wp_eval(zs[j] - zs[k], lat, 0) + wp_eval(zs[j] + zs[k], lat, 0)
    return val


def _validate_inozemtsev(zs, ws, lat):
    for j, z in enumerate(zs):
        for w in ws:
            if _near_lattice(z - w, lat):
                raise InvalidConfigurationError(
                    f"points[{j}] hits a half-period point"
                )
        for k in range(j):
            if _near_lattice(z - zs[k], lat) or _near_lattice(z + zs[k], lat):
                raise InvalidConfigurationError(
                    f"points[{j}] meets the reflection orbit of points[{k}]"
                )
        if _near_lattice(2 * z, lat):
            raise InvalidConfigurationError(
                f"points[{j}] collides with its own reflection"
            )


def inozemtsev_gradient(points, ms, lat: Lattice) -> list:
    """dU/dz_j; critical points carry finite-gap even second order operators."""
    zs = [complex(z) for z in points]
    ms = [complex(m) for m in ms]
    if len(ms) != 4:
        raise InvalidConfigurationError("need the four parameters m0..m3")
    ws = _half_periods(lat)
    _validate_inozemtsev(zs, ws, lat)
    out = []
    for j, z in enumerate(zs):
        g = 0j
        for mi, w in zip(ms, ws):
            g += (mi + 0.5) ** 2 * wp_eval(z - w, lat, 1)
        for k in range(len(zs)):
            if k == j:
                continue
            g += 2 * (wp_eval(z - zs[k], lat, 1) + wp_eval(z + zs[k], lat, 1))
        out.append(g)
    return out


# -- Newton solver -------------------------------------------------------------


@dataclass
class NewtonResult:
    success: bool
    solution: list
    residual_norm: float
    iterations: int
    jacobian_rank: int | None
    used_least_squares: bool
    trace: list = field(default_factory=list)


def newton_critical(func, guess, step: float = 1e-7, tol: float = 1e-10,
                    max_iter: int = 100, rank_tol: float = 1e-8) -> NewtonResult:
    """Damped complex Newton iteration on a square residual system.

    func maps a complex vector to a complex residual vector of equal length
    (gauge freedom must already be fixed by the caller).  The Jacobian is
    forward-differenced with the given step; singular Jacobians fall back to
    a least-squares step and set a flag.  Success means residual max-norm
    below tol within max_iter iterations.
    """
    x = np.asarray([complex(v) for v in guess], dtype=complex)
    m = len(x)
    used_lstsq = False
    trace = []

    def F(v):
        out = np.asarray(func(list(v)), dtype=complex)
        if out.shape != (m,):
            raise ValueError("residual system is not square after gauge fixing")
        return out

    fx = F(x)
    norm = float(np.max(np.abs(fx))) if m else 0.0
    trace.append(norm)
    it = 0
    rank = None
    while norm >= tol and it < max_iter:
        J = np.empty((m, m), dtype=complex)
        for k in range(m):
            xp = x.copy()
            xp[k] += step
            J[:, k] = (F(xp) - fx) / step
        try:
            delta = np.linalg.solve(J, -fx)
            if not np.all(np.isfinite(delta)):
                raise np.linalg.LinAlgError
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(J, -fx, rcond=None)[0]
            used_lstsq = True
        # damp: halve until the residual actually drops
        t = 1.0
        for _ in range(30):
            cand = x + t * delta
            fc = F(cand)
            cn = float(np.max(np.abs(fc)))
            if cn < norm or t < 1e-9:
                break
            t /= 2
        if cn >= norm and t >= 1e-9:
            break  # no descent direction left
        x, fx, norm = cand, fc, cn
        it += 1
        trace.append(norm)
    success = norm < tol
    if m:
        J = np.empty((m, m), dtype=complex)
        for k in range(m):
            xp = x.copy()
            xp[k] += step
            J[:, k] = (F(xp) - fx) / step
        sv = np.linalg.svd(J, compute_uv=False)
        cut = rank_tol * (sv[0] if sv[0] > 0 else 1.0)
        rank = int(np.sum(sv > cut))
    return NewtonResult(success, list(x), norm, it, rank, used_lstsq, trace)


# -- JSON helpers ---------------------------------------------------------------


def complex_to_json(z: complex):
    return [z.real, z.imag]


def complex_from_json(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])
