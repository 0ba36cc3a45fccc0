"""Differential operators: local Fuchsian form, global one-pole elliptic
form, indices, adjoints, composition, cyclic operators, and commuting
certificates."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .rationals import Rat, ZERO, as_rat
from .poly import MultiPoly, RatFunc
from .series import LaurentSeries, ShiftedSeries
from .elliptic import EllipticElement
from .linalg import solve_linear_over_field


class InvalidGapsError(ValueError):
    pass


# -- generic operator algebra ----------------------------------------------
#
# An operator is a dict {power: coefficient}; coefficients live in any ring
# with +, *, unary -, and .derivative() (LaurentSeries or EllipticElement).


def _binom(i, k):
    return math.comb(i, k)


def op_compose(A: dict, B: dict) -> dict:
    out = {}
    for i, a in A.items():
        for j, b in B.items():
            d = b
            for k in range(i + 1):
                term = a * d * Rat(_binom(i, k))
                p = i + j - k
                out[p] = (out[p] + term) if p in out else term
                if k < i:
                    d = d.derivative()
    return _op_clean(out)


def _op_clean(op: dict) -> dict:
    return {p: c for p, c in op.items() if not c.is_zero()}


def op_sub(A: dict, B: dict) -> dict:
    out = dict(A)
    for p, c in B.items():
        out[p] = (out[p] + (-c)) if p in out else (-c)
    return _op_clean(out)


def op_commutator(A: dict, B: dict) -> dict:
    return op_sub(op_compose(A, B), op_compose(B, A))


def op_order(op: dict) -> int:
    return max(op) if op else -1


# -- index data -------------------------------------------------------------


@dataclass(frozen=True)
class IndexData:
    """Sorted indices of an operator at a point, plus their gaps."""

    indices: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "indices", tuple(sorted(as_rat(m) for m in self.indices))
        )

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def gaps(self):
        m = self.indices
        return tuple(m[j] - m[j - 1] for j in range(1, len(m)))

    def index_sum_ok(self) -> bool:
        n = self.n
        return sum(self.indices) == Rat(n * (n - 1), 2)

    def all_integer(self) -> bool:
        return all(m.denominator == 1 for m in self.indices)


def homogeneous_integrable(idx: IndexData, n: int):
    """Integers, pairwise distinct mod n.  Returns (ok, reason)."""
    if idx.n != n:
        return False, "wrong number of indices"
    if not idx.all_integer():
        return False, "non-integer indices"
    residues = [int(m) % n for m in idx.indices]
    if len(set(residues)) != n:
        return False, "indices repeat a residue class mod n"
    return True, None


# -- local operators --------------------------------------------------------


def _ff_poly(k: int) -> MultiPoly:
    """m(m-1)...(m-k+1) as a polynomial in m."""
    out = MultiPoly.const(1, ("m",))
    for j in range(k):
        out = out * (MultiPoly.var("m") - Rat(j))
    return out


class LocalOperator:
    """Monic order-n operator with a_1 = 0 and Fuchsian pole bounds:
    ord_0(a_i) >= -i for the coefficient a_i of d^(n-i)."""

    def __init__(self, n: int, coeffs: dict):
        if n < 2:
            raise ValueError("order must be at least 2")
        self.n = n
        self.coeffs = {}
        for i in range(2, n + 1):
            s = coeffs.get(i)
            if s is None:
                order = min(c.order for c in coeffs.values()) if coeffs else 8
                s = LaurentSeries.zero(order)
            if s.valuation() is not None and s.valuation() < -i:
                raise ValueError(
                    f"coefficient a_{i} has a pole of order > {i}: not Fuchsian"
                )
            self.coeffs[i] = s

    def b(self, i: int) -> MultiPoly:
        """Leading Laurent coefficient of a_i at z^-i."""
        return self.coeffs[i].coefficient(-i)

    def indicial_polynomial(self) -> MultiPoly:
        P = _ff_poly(self.n)
        for i in range(2, self.n + 1):
            P = P + self.b(i) * _ff_poly(self.n - i)
        return P

    def indices(self):
        """(IndexData or None, unresolved_factor or None).

        Indices are the rational roots of the indicial polynomial; if some
        roots are irrational the residual factor is reported unresolved.
        """
        P = self.indicial_polynomial()
        coeffs = P.coefficients_in("m")
        if any(not c.is_constant() for c in coeffs.values()):
            raise ValueError("indicial polynomial has symbolic coefficients")
        deg = max(coeffs)
        poly = [
            coeffs[k].constant_value() if k in coeffs else ZERO
            for k in range(deg + 1)
        ]
        roots = _rational_roots(poly)
        if len(roots) == deg:
            return IndexData(roots), None
        return (IndexData(roots) if roots else None), P

    def apply(self, psi: ShiftedSeries, lam=None) -> ShiftedSeries:
        """(L - lambda) psi for a shifted series psi."""
        derivs = [psi]
        for _ in range(self.n):
            derivs.append(derivs[-1].differentiate())
        out = derivs[self.n]
        for i in range(2, self.n + 1):
            out = out + self.coeffs[i] * derivs[self.n - i]
        if lam is not None:
            if not isinstance(lam, MultiPoly):
                lam = MultiPoly.const(as_rat(lam))
            out = out + ShiftedSeries(psi.expo, psi.series * (-lam))
        return out

    def as_opdict(self, lead_order=None):
        if lead_order is None:
            lead_order = min(c.order for c in self.coeffs.values())
        d = {self.n: LaurentSeries.monomial(1, 0, lead_order + self.n + 2)}
        for i, c in self.coeffs.items():
            if not c.is_zero_to_order():
                d[self.n - i] = c
        return d


def _rational_roots(poly):
    """Rational roots (with multiplicity) of a rational-coefficient
    polynomial given as a coefficient list, low to high."""
    poly = [as_rat(c) for c in poly]
    while poly and poly[-1] == 0:
        poly.pop()
    roots = []
    # strip roots at zero
    while poly and poly[0] == 0:
        roots.append(ZERO)
        poly = poly[1:]
    if len(poly) <= 1:
        return roots
    den_lcm = 1
    for c in poly:
        d = int(c.denominator)
        den_lcm = den_lcm * d // math.gcd(den_lcm, d)
    ipoly = [int(c * den_lcm) for c in poly]

    def divisors(v):
        v = abs(v)
        out = set()
        f = 1
        while f * f <= v:
            if v % f == 0:
                out.add(f)
                out.add(v // f)
            f += 1
        return out

    changed = True
    while changed and len(poly) > 1:
        changed = False
        a0, an = ipoly[0], ipoly[-1]
        cands = sorted(
            {Rat(sp * p, qq) for p in divisors(a0) for qq in divisors(an) for sp in (1, -1)},
            key=lambda x: (abs(x), x < 0),
        )
        for cand in cands:
            val = ZERO
            for c in reversed(poly):
                val = val * cand + c
            if val == 0:
                roots.append(cand)
                # synthetic division
                new = []
                carry = ZERO
                for c in reversed(poly[1:]):
                    carry = carry * cand + c
                    new.append(carry)
                poly = list(reversed(new))
                den_lcm = 1
                for c in poly:
                    d = int(c.denominator)
                    den_lcm = den_lcm * d // math.gcd(den_lcm, d)
                ipoly = [int(c * den_lcm) for c in poly]
                changed = True
                break
    return roots


# -- global one-pole operators ----------------------------------------------


class GlobalEllipticOperator:
    """Monic operator of order n with a_1 = 0 whose coefficients are
    elements of the elliptic function ring, all poles at z = 0."""

    def __init__(self, n: int, coeffs: dict):
        self.n = n
        self.coeffs = {i: coeffs.get(i, EllipticElement.zero()) for i in range(2, n + 1)}

    @property
    def order(self):
        return self.n

    def as_opdict(self):
        d = {self.n: EllipticElement.const(1)}
        for i, c in self.coeffs.items():
            if not c.is_zero():
                d[self.n - i] = c
        return d

    def localize(self, K: int) -> LocalOperator:
        return LocalOperator(self.n, {i: c.to_series(K) for i, c in self.coeffs.items()})

    def substitute(self, mapping) -> "GlobalEllipticOperator":
        return GlobalEllipticOperator(
            self.n, {i: c.substitute(mapping) for i, c in self.coeffs.items()}
        )

    def adjoint(self) -> "GlobalEllipticOperator":
        adj = adjoint_opdict(self.as_opdict(), EllipticElement.const(1))
        coeffs = {}
        for p, c in adj.items():
            if p == self.n:
                continue
            if p == self.n - 1 and not c.is_zero():
                raise ValueError("adjoint produced a d^(n-1) term")
            coeffs[self.n - p] = c
        return GlobalEllipticOperator(self.n, coeffs)

    def text(self) -> str:
        chunks = [f"D^{self.n}"]
        for i in range(2, self.n + 1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            p = self.n - i
            body = c.text()
            if p == 0:
                chunks.append(f"({body})" if " " in body else body)
            else:
                dpart = "D" if p == 1 else f"D^{p}"
                chunks.append(f"({body})*{dpart}")
        return " + ".join(chunks)

    def __str__(self):
        return self.text()


def adjoint_opdict(op: dict, one):
    """Formal adjoint sum (-d)^p . a_p, normalized to be monic."""
    n = op_order(op)
    out = {}
    for p, a in op.items():
        term = op_compose({p: one}, {0: a}) if p else {0: a}
        sign = Rat((-1) ** p)
        for pw, c in term.items():
            c = c * sign
            out[pw] = (out[pw] + c) if pw in out else c
    out = _op_clean(out)
    if n % 2 == 1:
        out = {p: c * Rat(-1) for p, c in out.items()}
    return out


def third_order_indices(q: int, r: int) -> IndexData:
    if (q - r) % 3 != 0 or q % 3 == 0 or r % 3 == 0:
        raise InvalidGapsError(
            f"gaps ({q},{r}) must be congruent mod 3 and not divisible by 3"
        )
    m0 = Rat(3 - (2 * q + r), 3)
    m1 = Rat(3 + (q - r), 3)
    m2 = Rat(3 + (2 * r + q), 3)
    return IndexData((m0, m1, m2))


def third_order_from_gaps(q: int, r: int, c=None, e=None, check: bool = True) -> GlobalEllipticOperator:
    """The one-pole operator D^3 + (a*P + c)D + (b*P' + e*P) whose indicial
    roots realize the gaps (q, r); a and b are forced by the roots."""
    if check:
        idx = third_order_indices(q, r)
    else:
        m0 = Rat(3 - (2 * q + r), 3)
        m1 = Rat(3 + (q - r), 3)
        m2 = Rat(3 + (2 * r + q), 3)
        idx = IndexData((m0, m1, m2))
    m0, m1, m2 = idx.indices
    a = m0 * m1 + m0 * m2 + m1 * m2 - 2
    b = m0 * m1 * m2 / 2
    if c is None:
        c = MultiPoly.var("c")
    if e is None:
        e = MultiPoly.var("e")
    a2 = EllipticElement([c, a])
    a3 = EllipticElement([0, e], [b])
    return GlobalEllipticOperator(3, {2: a2, 3: a3})


def coefficients_from_indices(idx: IndexData):
    """Leading Laurent coefficients b_2..b_n matching the indicial roots."""
    n = idx.n
    target = MultiPoly.const(1, ("m",))
    for m in idx.indices:
        target = target * (MultiPoly.var("m") - m)
    R = target - _ff_poly(n)
    bs = {}
    for i in range(2, n + 1):
        deg = n - i
        cf = R.coefficient_of("m", deg)
        b_i = cf.constant_value() if not cf.is_zero() else ZERO
        bs[i] = b_i
        if b_i != 0:
            R = R - _ff_poly(deg) * b_i
    if not R.is_zero():
        raise ArithmeticError("indicial matching failed")
    return bs


def cyclic_L0(n: int, idx: IndexData, curve: str = "generic") -> GlobalEllipticOperator:
    """The unique operator with indices idx whose coefficients expand as
    b_i z^-i + O(z): every deeper nonpositive Laurent coefficient is zero.

    curve selects a specialization: "generic", "g2=0" (equianharmonic) or
    "g3=0" (lemniscatic)."""
    ok, reason = homogeneous_integrable(idx, n)
    if not ok:
        raise ValueError(f"indices not integrable: {reason}")
    if not idx.index_sum_ok():
        raise ValueError("index sum incompatible with a vanishing d^(n-1) term")
    if n not in (2, 3, 4, 6):
        warnings.warn(
            f"order {n}: cyclic symmetry does not certify integrability",
            stacklevel=2,
        )
    bs = coefficients_from_indices(idx)
    coeffs = {}
    deriv = EllipticElement.P()
    basis = {2: deriv}
    for i in range(3, n + 1):
        deriv = deriv.derivative()
        basis[i] = deriv
    subs = {}
    if curve == "g2=0":
        subs = {"g2": MultiPoly.zero()}
    elif curve == "g3=0":
        subs = {"g3": MultiPoly.zero()}
    elif curve != "generic":
        raise ValueError(f"unknown curve mode {curve!r}")
    for i in range(2, n + 1):
        if bs[i] == 0:
            continue
        scale = Rat((-1) ** i) / Rat(math.factorial(i - 1))
        f_i = (basis[i] * scale).drop_constant()
        if subs:
            f_i = f_i.substitute(subs)
        coeffs[i] = f_i * bs[i]
    return GlobalEllipticOperator(n, coeffs)


# -- commuting certificates --------------------------------------------------


def _elliptic_basis(max_pole: int):
    """Monomials P^a (P')^b, b <= 1, of pole order <= max_pole (incl. 1)."""
    out = []
    for b in (0, 1):
        a = 0
        while 2 * a + 3 * b <= max_pole:
            out.append((a, b))
            a += 1
    return sorted(out, key=lambda ab: (2 * ab[0] + 3 * ab[1], ab[1]))


def find_commuting(L: GlobalEllipticOperator, m: int, pole_bound: int | None = None):
    """Search for a monic order-m operator M with [L, M] = 0, with
    coefficient pole orders <= pole_bound + i.  Returns an operator dict
    {power: EllipticElement} or None."""
    n = L.order
    if math.gcd(n, m) != 1:
        raise ValueError(f"order {m} not coprime to {n}")
    if pole_bound is None:
        pole_bound = n + m
    unknowns = []
    M = {m: EllipticElement.const(1)}
    for i in range(1, m + 1):
        acc = EllipticElement.zero()
        for a, b in _elliptic_basis(pole_bound + i):
            name = f"u{len(unknowns) + 1}"
            unknowns.append(name)
            mono = EllipticElement.P() ** a
            if b:
                mono = mono * EllipticElement.Pprime()
            acc = acc + mono * MultiPoly.var(name)
        M[m - i] = acc
    C = op_commutator(L.as_opdict(), M)
    equations = []
    for coeff in C.values():
        for part in (coeff.part0, coeff.part1):
            for p in part:
                if not p.is_zero():
                    equations.append(p)
    zero_subs = {u: MultiPoly.zero() for u in unknowns}
    rows, rhs = [], []
    for eq in equations:
        row = [eq.coefficient_of(u, 1).substitute(zero_subs) for u in unknowns]
        const = eq.substitute(zero_subs)
        if isinstance(const, RatFunc):
            const = const.as_poly()
        rows.append(row)
        rhs.append(-const)
    sol = solve_linear_over_field(rows, rhs)
    if sol.conditions:
        return None
    values = {}
    for name, val in zip(unknowns, sol.solution):
        try:
            values[name] = val.as_poly()
        except ValueError:
            return None
    out = {m: EllipticElement.const(1)}
    for p, c in M.items():
        if p == m:
            continue
        c2 = c.substitute(values)
        if not c2.is_zero():
            out[p] = c2
    # never trust the ansatz: re-verify the commutator exactly
    check = op_commutator(L.as_opdict(), out)
    if check:
        raise ArithmeticError("candidate certificate fails to commute")
    return out
