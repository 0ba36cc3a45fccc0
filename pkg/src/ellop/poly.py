"""Sparse multivariate polynomials and rational functions over exact rationals.

Monomials are stored as a dict mapping exponent tuples to nonzero rational
coefficients.  The variable universe is an ordered tuple of names; binary
operations extend it to the union automatically.  Printing and "leading
coefficient" use graded lexicographic order, graded by the homothety weights
deg(e)=1, deg(c)=2, deg(lambda)=3, deg(g2)=4, deg(g3)=6 (other variables
weigh 0, so they compare by plain lex within a grade).
"""

from __future__ import annotations

import math

from .rationals import ONE, Rat, ZERO, as_rat, rat_str

# Canonical position of the well-known variables; anything else sorts after
# them alphabetically.
_CANON = {"c": 0, "e": 1, "g2": 2, "g3": 3, "lambda": 4, "q": 5, "w": 6, "m": 7}

WEIGHTS = {"e": 1, "c": 2, "lambda": 3, "g2": 4, "g3": 6, "w": 2}


def _var_key(name: str):
    if name in _CANON:
        return (0, _CANON[name], name)
    return (1, 0, name)


def sort_vars(names):
    return tuple(sorted(set(names), key=_var_key))


class MultiPoly:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms")

    def __init__(self, variables=(), terms=None):
        self.vars = tuple(variables)
        self.terms = {} if terms is None else terms

    # -- construction -----------------------------------------------------

    @classmethod
    def const(cls, value, variables=()):
        value = as_rat(value)
        variables = tuple(variables)
        if value == 0:
            return cls(variables, {})
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def var(cls, name, power: int = 1, coeff=1):
        coeff = as_rat(coeff)
        if coeff == 0:
            return cls((name,), {})
        return cls((name,), {(power,): coeff})

    @classmethod
    def zero(cls, variables=()):
        return cls(tuple(variables), {})

    # -- universe handling ------------------------------------------------

    def in_universe(self, variables) -> "MultiPoly":
        """Re-express self over a superset universe (order-canonical)."""
        variables = tuple(variables)
        if variables == self.vars:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        idx = [pos[v] for v in self.vars]
        terms = {}
        for expo, cf in self.terms.items():
            new = [0] * len(variables)
            for i, p in zip(idx, expo):
                new[i] = p
            terms[tuple(new)] = cf
        return MultiPoly(variables, terms)

    @staticmethod
    def align(a: "MultiPoly", b: "MultiPoly"):
        if a.vars == b.vars:
            return a, b
        uni = sort_vars(a.vars + b.vars)
        return a.in_universe(uni), b.in_universe(uni)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(p == 0 for p in expo) for expo in self.terms)

    def constant_value(self):
        if not self.terms:
            return ZERO
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return next(iter(self.terms.values()))

    def used_vars(self):
        used = set()
        for expo in self.terms:
            for v, p in zip(self.vars, expo):
                if p:
                    used.add(v)
        return used

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(as_rat(other), self.vars)

    def __add__(self, other):
        if not isinstance(other, (MultiPoly, int, Rat)) and not hasattr(other, "numerator"):
            return NotImplemented
        a, b = MultiPoly.align(self, self._coerce(other))
        terms = dict(a.terms)
        for expo, cf in b.terms.items():
            s = terms.get(expo, ZERO) + cf
            if s == 0:
                terms.pop(expo, None)
            else:
                terms[expo] = s
        return MultiPoly(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other) if not isinstance(other, MultiPoly) else -other)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                cf = as_rat(other)
            except TypeError:
                return NotImplemented
            if cf == 0:
                return MultiPoly(self.vars, {})
            return MultiPoly(self.vars, {e: c * cf for e, c in self.terms.items()})
        a, b = MultiPoly.align(self, other)
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                expo = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(expo, ZERO) + c1 * c2
                if s == 0:
                    terms.pop(expo, None)
                else:
                    terms[expo] = s
        return MultiPoly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            a, b = MultiPoly.align(self, other)
            return a.terms == b.terms
        try:
            cf = as_rat(other)
        except TypeError:
            return NotImplemented
        return self.is_constant() and (not self.terms or self.constant_value() == cf)

    def __hash__(self):
        # hash by content-free canonical form is overkill; use term data over
        # the used universe only
        used = sort_vars(self.used_vars())
        p = self.in_universe(used) if used != self.vars else self
        return hash((p.vars, frozenset(p.terms.items())))

    # -- degrees and ordering --------------------------------------------

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def _weights(self):
        return tuple(WEIGHTS.get(v, 0) for v in self.vars)

    def weighted_degree(self):
        """Max homothety weight over terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        w = self._weights()
        return max(sum(p * wi for p, wi in zip(e, w)) for e in self.terms)

    def is_weighted_homogeneous(self):
        if not self.terms:
            return True
        w = self._weights()
        degs = {sum(p * wi for p, wi in zip(e, w)) for e in self.terms}
        return len(degs) == 1

    def _mono_key(self, expo):
        w = self._weights()
        return (sum(p * wi for p, wi in zip(expo, w)), expo)

    def sorted_monomials(self):
        return sorted(self.terms, key=self._mono_key, reverse=True)

    def leading(self):
        """(exponent tuple, coefficient) of the greatest monomial."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        expo = max(self.terms, key=self._mono_key)
        return expo, self.terms[expo]

    def leading_coeff(self):
        return self.leading()[1]

    # -- normalization ----------------------------------------------------

    def content(self):
        """Positive rational c such that self/c has coprime integer coefficients."""
        if not self.terms:
            return ONE
        num_gcd = 0
        den_lcm = 1
        for cf in self.terms.values():
            num_gcd = math.gcd(num_gcd, abs(int(cf.numerator)))
            d = int(cf.denominator)
            den_lcm = den_lcm * d // math.gcd(den_lcm, d)
        return Rat(num_gcd, den_lcm)

    def primitive(self):
        """self divided by signed content: content 1, positive leading coeff."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coeff() < 0:
            c = -c
        inv = 1 / c
        return MultiPoly(self.vars, {e: cf * inv for e, cf in self.terms.items()})

    # -- structure queries ------------------------------------------------

    def degree_in(self, name: str) -> int:
        if name not in self.vars or not self.terms:
            return 0
        i = self.vars.index(name)
        return max(e[i] for e in self.terms)

    def coefficients_in(self, name: str):
        """Split as a univariate polynomial in `name`: {power: MultiPoly}."""
        if name not in self.vars:
            return {0: self} if self.terms else {}
        i = self.vars.index(name)
        rest = self.vars[:i] + self.vars[i + 1 :]
        out = {}
        for expo, cf in self.terms.items():
            p = expo[i]
            sub = expo[:i] + expo[i + 1 :]
            d = out.setdefault(p, {})
            d[sub] = d.get(sub, ZERO) + cf
        return {p: MultiPoly(rest, {e: c for e, c in d.items() if c != 0}) for p, d in out.items() if any(c != 0 for c in d.values())}

    def coefficient_of(self, name: str, power: int) -> "MultiPoly":
        return self.coefficients_in(name).get(power, MultiPoly.zero(self.vars))

    # -- substitution and evaluation --------------------------------------

    def substitute(self, mapping):
        """Ring-homomorphic substitution var -> MultiPoly / RatFunc / rational.

        Returns a MultiPoly if every value is polynomial, else a RatFunc.
        Raises ZeroDivisionError if a substituted denominator vanishes.
        """
        from_ratfunc = any(isinstance(v, RatFunc) for v in mapping.values())
        vals = {}
        for k, v in mapping.items():
            if isinstance(v, (MultiPoly, RatFunc)):
                vals[k] = v
            else:
                vals[k] = MultiPoly.const(as_rat(v))
        if from_ratfunc:
            vals = {k: (v if isinstance(v, RatFunc) else RatFunc(v)) for k, v in vals.items()}
            zero = RatFunc(MultiPoly.zero())
            one = RatFunc(MultiPoly.const(1))
        else:
            zero = MultiPoly.zero()
            one = MultiPoly.const(1)
        out = zero
        cache = {}
        for expo, cf in self.terms.items():
            term = one * cf
            for v, p in zip(self.vars, expo):
                if p == 0:
                    continue
                if v in vals:
                    key = (v, p)
                    if key not in cache:
                        cache[key] = vals[v] ** p
                    term = term * cache[key]
                else:
                    term = term * MultiPoly.var(v, p)
            out = out + term
        return out

    def evaluate(self, mapping):
        """Numeric evaluation; mapping must cover every used variable."""
        out = 0
        for expo, cf in self.terms.items():
            t = complex(int(cf.numerator)) / complex(int(cf.denominator))
            for v, p in zip(self.vars, expo):
                if p:
                    t *= mapping[v] ** p
            out += t
        return out

    def evaluate_exact(self, mapping):
        """Evaluate at exact rational points for the given variables."""
        out = ZERO
        for expo, cf in self.terms.items():
            t = cf
            for v, p in zip(self.vars, expo):
                if p:
                    t *= as_rat(mapping[v]) ** p
            out = out + t
        return out

    # -- printing ---------------------------------------------------------

    def text(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for expo in self.sorted_monomials():
            cf = self.terms[expo]
            factors = []
            for v, p in zip(self.vars, expo):
                if p == 1:
                    factors.append(v)
                elif p > 1:
                    factors.append(f"{v}^{p}")
            if not factors:
                body = rat_str(abs(cf))
            elif abs(cf) == 1:
                body = "*".join(factors)
            else:
                body = rat_str(abs(cf)) + "*" + "*".join(factors)
            chunks.append(("-" if cf < 0 else "+", body))
        sign, body = chunks[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"MultiPoly({self.text()})"


# -- polynomial division ---------------------------------------------------


def try_div(a: MultiPoly, b: MultiPoly):
    """Exact division a/b over the rationals; None if not divisible."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if b.is_constant():
        return a * (1 / b.constant_value())
    a, b = MultiPoly.align(a, b)
    lead_b, cb = b.leading()
    quot = {}
    rem = dict(a.terms)
    key = a._mono_key if a.vars else None
    while rem:
        expo = max(rem, key=a._mono_key)
        cf = rem[expo]
        qe = tuple(x - y for x, y in zip(expo, lead_b))
        if any(p < 0 for p in qe):
            return None
        qc = cf / cb
        quot[qe] = quot.get(qe, ZERO) + qc
        for be, bc in b.terms.items():
            te = tuple(x + y for x, y in zip(qe, be))
            s = rem.get(te, ZERO) - qc * bc
            if s == 0:
                rem.pop(te, None)
            else:
                rem[te] = s
    return MultiPoly(a.vars, {e: c for e, c in quot.items() if c != 0})


def exact_div(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    q = try_div(a, b)
    if q is None:
        raise ArithmeticError(f"inexact polynomial division: ({a}) / ({b})")
    return q


def gcd_univariate(a: MultiPoly, b: MultiPoly, name: str) -> MultiPoly:
    """Monic-free gcd of two polynomials univariate in `name` (primitive)."""

    def to_coeffs(p):
        d = p.coefficients_in(name)
        if any(not c.is_constant() for c in d.values()):
            raise ValueError(f"{p} is not univariate in {name}")
        n = max(d) if d else 0
        return [d.get(i, MultiPoly.zero()).constant_value() if i in d else ZERO for i in range(n + 1)]

    fa, fb = to_coeffs(a), to_coeffs(b)

    def norm(f):
        while f and f[-1] == 0:
            f.pop()
        return f

    fa, fb = norm(fa), norm(fb)
    while fb:
        # fa mod fb
        while len(fa) >= len(fb) and fa:
            k = fa[-1] / fb[-1]
            off = len(fa) - len(fb)
            fa = [c - k * fb[i - off] if i >= off else c for i, c in enumerate(fa[:-1])]
            fa = norm(fa)
        fa, fb = fb, fa
    out = MultiPoly.zero((name,))
    for i, c in enumerate(fa):
        if c != 0:
            out = out + MultiPoly.var(name, i, c)
    return out.primitive() if not out.is_zero() else MultiPoly.const(1)


# -- rational functions -----------------------------------------------------


class RatFunc:
    """Quotient of MultiPolys; denominator primitive with positive leading
    coefficient.  Cancels constants, exact polynomial factors, and univariate
    common factors; no general multivariate gcd (not needed here)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.const(as_rat(num))
        if den is None:
            den = MultiPoly.const(1)
        elif not isinstance(den, MultiPoly):
            den = MultiPoly.const(as_rat(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num, den = MultiPoly.align(num, den)
        if num.is_zero():
            den = MultiPoly.const(1)
        elif den.is_constant():
            num = num * (1 / den.constant_value())
            den = MultiPoly.const(1)
        else:
            q = try_div(num, den)
            if q is not None:
                num, den = q, MultiPoly.const(1)
            else:
                nv, dv = num.used_vars(), den.used_vars()
                common = nv & dv
                if len(nv | dv) == 1 and len(common) == 1:
                    (v,) = common
                    g = gcd_univariate(num, den, v)
                    if g.total_degree() > 0:
                        num = exact_div(num, g)
                        den = exact_div(den, g)
                # normalize sign/content of the denominator
                c = den.content()
                if not den.is_zero() and den.leading_coeff() < 0:
                    c = -c
                inv = 1 / c
                den = den * inv
                num = num * inv
            num, den = MultiPoly.align(num, den)
        self.num = num
        self.den = den

    @classmethod
    def from_value(cls, v):
        if isinstance(v, RatFunc):
            return v
        return cls(v)

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial():
            raise ValueError(f"not a polynomial: {self}")
        return self.num * (1 / self.den.constant_value())

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return self.num.constant_value() / self.den.constant_value()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        return RatFunc(MultiPoly.const(as_rat(other)))

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den, self.num) ** (-k)
        return RatFunc(self.num**k, self.den**k)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):
        return hash((self.num, self.den))

    def substitute(self, mapping):
        num = self.num.substitute(mapping)
        den = self.den.substitute(mapping)
        num, den = RatFunc.from_value(num), RatFunc.from_value(den)
        if den.is_zero():
            raise ZeroDivisionError("substitution produced a zero denominator")
        return num / den

    def evaluate(self, mapping):
        d = self.den.evaluate(mapping)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(mapping) / d

    def evaluate_exact(self, mapping):
        d = self.den.evaluate_exact(mapping)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate_exact(mapping) / d

    def text(self):
        if self.is_polynomial():
            return self.as_poly().text()
        return f"({self.num.text()})/({self.den.text()})"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"RatFunc({self.text()})"
