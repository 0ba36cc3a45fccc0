"""Power-series obstruction engine for local monodromy.

A monic operator with integer indices has trivial local monodromy iff the
Frobenius recursion, run from each index with a symbolic spectral parameter,
produces no obstruction at any resonance.  Obstructions are polynomials in
the operator parameters, the spectral parameter, and the free parameters
introduced at earlier resonances; the locus conditions are their
coefficients with those auxiliary variables stripped off.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .rationals import Rat, ZERO, as_rat, falling_factorial
from .poly import MultiPoly
from .series import LaurentSeries, ShiftedSeries, TruncationError
from .operators import LocalOperator, IndexData, homogeneous_integrable


@dataclass(frozen=True)
class Condition:
    poly: MultiPoly          # content 1, positive leading coefficient
    lambda_degree: int
    provenance: tuple        # (order n, index, resonance offset)

    def text(self) -> str:
        return self.poly.text()


@dataclass
class ConstraintSet:
    """Parameter conditions cutting out an integrability locus."""

    n: int
    conditions: list = field(default_factory=list)
    unsatisfiable: bool = False
    reason: str | None = None
    q: int | None = None
    r: int | None = None

    def polys(self):
        return [c.poly for c in self.conditions]

    def is_empty(self) -> bool:
        return not self.unsatisfiable and not self.conditions

    def satisfied(self) -> bool:
        """For constant conditions: does the data lie on the locus?"""
        if self.unsatisfiable:
            return False
        return all(c.poly.is_zero() for c in self.conditions)

    def satisfied_at(self, mapping) -> bool:
        if self.unsatisfiable:
            return False
        for c in self.conditions:
            v = c.poly.substitute(mapping)
            if not (v.is_zero() if isinstance(v, MultiPoly) else v.is_zero()):
                return False
        return True

    def to_json(self) -> str:
        doc = {"n": self.n}
        if self.q is not None:
            doc["q"] = self.q
        if self.r is not None:
            doc["r"] = self.r
        if self.unsatisfiable:
            doc["unsatisfiable"] = True
            if self.reason:
                doc["reason"] = self.reason
        doc["conditions"] = [
            {"lambda_degree": c.lambda_degree, "poly": c.poly.text()}
            for c in self.conditions
        ]
        return json.dumps(doc)


@dataclass
class FrobeniusSolution:
    psi: ShiftedSeries
    obstructions: list       # (offset k, MultiPoly inhomogeneous term)
    free_parameters: list    # names of parameters introduced at resonances


def _constant_b(op: LocalOperator):
    bs = {}
    for i in range(2, op.n + 1):
        b = op.b(i)
        if not b.is_constant():
            raise ValueError("leading Laurent coefficients must be rational")
        bs[i] = b.constant_value()
    return bs


def _indicial_value(n: int, bs: dict, x):
    v = falling_factorial(x, n)
    for i in range(2, n + 1):
        v = v + bs[i] * falling_factorial(x, n - i)
    return v


def frobenius_solve(op: LocalOperator, m, K: int, lam=None,
                    param_prefix: str = "u") -> FrobeniusSolution:
    """Run the recursion psi = z^m (1 + sum f_k z^k) up to order K.

    lam is the spectral parameter (symbolic by default).  At a resonant
    offset k (indicial value of m + k is zero) the inhomogeneous term is
    recorded as an obstruction and f_k becomes a fresh free parameter.
    """
    m = as_rat(m)
    n = op.n
    bs = _constant_b(op)
    if _indicial_value(n, bs, m) != 0:
        raise ValueError(f"{m} is not an indicial root")
    if lam is None:
        lam = MultiPoly.var("lambda")
    elif not isinstance(lam, MultiPoly):
        lam = MultiPoly.const(as_rat(lam))
    # refuse truncations that cannot see every resonance
    offsets = _resonance_offsets(n, bs, m)
    if offsets and K < max(offsets):
        raise TruncationError(
            f"K={K} below deepest resonance offset {max(offsets)}"
        )
    f = {0: MultiPoly.const(1)}
    obstructions = []
    free = []
    for k in range(1, K + 1):
        inhom = MultiPoly.zero()
        for i in range(2, n + 1):
            a_i = op.coeffs[i]
            for j in range(a_i.low, k - i + 1):
                if j == -i:
                    continue
                A = a_i.coefficient(j)
                if A.is_zero():
                    continue
                kp = k - i - j
                inhom = inhom - A * f[kp] * falling_factorial(m + kp, n - i)
        if k >= n:
            inhom = inhom + lam * f[k - n]
        c = _indicial_value(n, bs, m + k)
        if c != 0:
            f[k] = inhom * (1 / c)
        else:
            obstructions.append((k, inhom))
            name = f"{param_prefix}{len(free) + 1}"
            free.append(name)
            f[k] = MultiPoly.var(name)
    series = LaurentSeries(0, [f[k] for k in range(K + 1)], K + 1)
    psi = ShiftedSeries(MultiPoly.const(m), series)
    return FrobeniusSolution(psi, obstructions, free)


def _resonance_offsets(n: int, bs: dict, m):
    """Positive integer offsets k with indicial value zero at m + k."""
    from .operators import _rational_roots

    x = MultiPoly.var("m")
    P = _ff_sym(n)
    for i in range(2, n + 1):
        if bs[i] != 0:
            P = P + _ff_sym(n - i) * bs[i]
    coeffs = P.coefficients_in("m")
    lst = [coeffs[d].constant_value() if d in coeffs else ZERO
           for d in range(max(coeffs) + 1)]
    roots = _rational_roots(lst)
    out = []
    for rt in roots:
        d = rt - m
        if d.denominator == 1 and d > 0:
            out.append(int(d))
    return out


def _ff_sym(k: int) -> MultiPoly:
    out = MultiPoly.const(1, ("m",))
    for j in range(k):
        out = out * (MultiPoly.var("m") - Rat(j))
    return out


def _split_coefficients(poly: MultiPoly, names):
    """All coefficients of poly w.r.t. monomials in names: {expo: MultiPoly}."""
    out = {(): poly}
    for nm in names:
        new = {}
        for key, p in out.items():
            for d, c in p.coefficients_in(nm).items():
                new[key + (d,)] = c
        out = new
    return out


def trivial_monodromy_constraints(op: LocalOperator, mode: str = "full") -> ConstraintSet:
    """Conditions on the operator parameters for trivial local monodromy.

    full: run the recursion from every index and emit every coefficient of
    every obstruction with respect to the spectral parameter and the free
    resonance parameters.  The free-parameter coefficients of an obstruction
    reproduce obstructions of higher indices, so stripping them this way
    cuts out exactly the trivial-monodromy locus.

    middle-only: order 3 only; obstruction of the middle-index solution,
    split by spectral-parameter degree.
    """
    n = op.n
    idx, unresolved = op.indices()
    if unresolved is not None or idx is None:
        return ConstraintSet(n, unsatisfiable=True, reason="non-rational indices")
    ok, reason = homogeneous_integrable(idx, n)
    if not ok:
        return ConstraintSet(n, unsatisfiable=True, reason=reason)
    ms = idx.indices
    if mode == "middle-only":
        if n != 3:
            raise ValueError("middle-only mode requires order 3")
        run = [ms[1]]
    elif mode == "full":
        run = list(ms[:-1])
    else:
        raise ValueError(f"unknown mode {mode!r}")
    top = ms[-1]
    conditions = []
    seen = set()
    for m in run:
        K = int(top - m)
        sol = frobenius_solve(op, m, K)
        for offset, obs in sol.obstructions:
            pieces = _split_coefficients(obs, ["lambda"] + sol.free_parameters)
            for expo in sorted(pieces, reverse=True):
                p = pieces[expo]
                if p.is_zero():
                    continue
                p = p.primitive()
                # canonical text ignores unused universe variables
                key = p.text()
                if key in seen:
                    continue
                seen.add(key)
                conditions.append(Condition(p, expo[0], (n, m, offset)))
    return ConstraintSet(n, conditions)


def second_order_conditions(m: int, u: LaurentSeries) -> ConstraintSet:
    """Conditions for trivial monodromy of d^2 + u with a -m(m+1)/z^2 pole:
    the odd Laurent coefficients of u through exponent 2m - 1."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    want = MultiPoly.const(Rat(-m * (m + 1)))
    if not (u.coefficient(-2) - want).is_zero():
        raise ValueError("principal part must be -m(m+1)/z^2")
    if not u.coefficient(-1).is_zero():
        raise ValueError("1/z term must vanish")
    conditions = []
    for j in range(1, 2 * m, 2):
        cj = u.coefficient(j)
        if cj.is_zero():
            continue
        conditions.append(Condition(cj.primitive(), 0, (2, Rat(-m), j + 2)))
    return ConstraintSet(2, conditions)


def two_gap_conditions(a_coeffs, b_coeffs) -> ConstraintSet:
    """Conditions for gaps (2,2): a(z) = sum a_k z^(k-2), b(z) = sum
    b_k z^(k-3), normalized a0 = -3, b0 = 3 (indices -1, 1, 3)."""
    a = [_as_mp(x) for x in a_coeffs]
    b = [_as_mp(x) for x in b_coeffs]
    if len(a) < 5 or len(b) < 5:
        raise ValueError("need coefficients a0..a4 and b0..b4")
    if not (a[0] - Rat(-3)).is_zero() or not (b[0] - Rat(3)).is_zero():
        raise ValueError("principal parts must be a0 = -3, b0 = 3")
    raw = [
        (a[1], 2),
        (b[2], 2),
        (a[2] * 3 + b[1] * b[1], 2),
        (b[4] * 3 - a[4] * 3 - b[1] * a[3], 4),
    ]
    conditions = []
    for p, offset in raw:
        if p.is_zero():
            continue
        conditions.append(Condition(p.primitive(), 0, (3, Rat(-1), offset)))
    return ConstraintSet(3, conditions)


def _as_mp(x):
    if isinstance(x, MultiPoly):
        return x
    return MultiPoly.const(as_rat(x))
