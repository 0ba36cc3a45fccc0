"""Truncated Laurent series in z with exact polynomial coefficients."""

from __future__ import annotations

from .rationals import Rat, as_rat
from .poly import MultiPoly


class TruncationError(Exception):
    """A coefficient beyond the trusted truncation order was requested."""


def _coerce_coeff(c):
    if isinstance(c, MultiPoly):
        return c
    return MultiPoly.const(as_rat(c))


class LaurentSeries:
    """Coefficients for exponents low .. order-1; `order` is the first
    untrusted exponent.  Coefficients are MultiPoly (rationals embed)."""

    __slots__ = ("low", "coeffs", "order")

    def __init__(self, low: int, coeffs, order: int):
        coeffs = [_coerce_coeff(c) for c in coeffs]
        if order < low:
            raise ValueError("truncation order below lowest exponent")
        want = order - low
        if len(coeffs) > want:
            coeffs = coeffs[:want]
        elif len(coeffs) < want:
            coeffs = coeffs + [MultiPoly.zero()] * (want - len(coeffs))
        self.low = low
        self.coeffs = coeffs
        self.order = order

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order: int):
        return cls(order, [], order)

    @classmethod
    def one(cls, order: int):
        return cls.monomial(1, 0, order)

    @classmethod
    def monomial(cls, coeff, expo: int, order: int):
        if expo >= order:
            return cls.zero(order)
        c = _coerce_coeff(coeff)
        return cls(expo, [c], order)

    @classmethod
    def from_dict(cls, d: dict, order: int):
        d = {k: _coerce_coeff(v) for k, v in d.items() if k < order}
        if not d:
            return cls.zero(order)
        low = min(d)
        return cls(low, [d.get(k, MultiPoly.zero()) for k in range(low, order)], order)

    # -- access ------------------------------------------------------------

    def coefficient(self, k: int) -> MultiPoly:
        if k >= self.order:
            raise TruncationError(f"exponent {k} beyond trusted order {self.order}")
        if k < self.low:
            return MultiPoly.zero()
        return self.coeffs[k - self.low]

    def valuation(self):
        """Exponent of the first nonzero stored coefficient (None if all zero)."""
        for k in range(self.low, self.order):
            if not self.coeffs[k - self.low].is_zero():
                return k
        return None

    def normalized(self) -> "LaurentSeries":
        """Strip leading stored zeros (explicit request per the contract)."""
        v = self.valuation()
        if v is None:
            return LaurentSeries.zero(self.order)
        return LaurentSeries(v, self.coeffs[v - self.low :], self.order)

    def is_zero_to_order(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.monomial(other, 0, self.order)
        order = min(self.order, other.order)
        low = min(self.low, other.low)
        coeffs = []
        for k in range(low, order):
            a = self.coeffs[k - self.low] if self.low <= k < self.order else MultiPoly.zero()
            b = other.coeffs[k - other.low] if other.low <= k < other.order else MultiPoly.zero()
            coeffs.append(a + b)
        return LaurentSeries(low, coeffs, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(self.low, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.monomial(other, 0, self.order)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            c = _coerce_coeff(other)
            return LaurentSeries(self.low, [x * c for x in self.coeffs], self.order)
        # product trusted while both factors are trusted
        order = min(self.low + other.order, other.low + self.order)
        low = self.low + other.low
        n = order - low
        acc = [MultiPoly.zero() for _ in range(max(n, 0))]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                k = i + j
                if k >= n:
                    break
                if b.is_zero():
                    continue
                acc[k] = acc[k] + a * b
        return LaurentSeries(low, acc, order)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of a series are not supported")
        out = LaurentSeries.monomial(1, 0, self.order + abs(self.low) * (k + 1) + 1)
        for _ in range(k):
            out = out * self
        return out

    def differentiate(self) -> "LaurentSeries":
        coeffs = []
        for k in range(self.low, self.order):
            coeffs.append(self.coeffs[k - self.low] * Rat(k))
        return LaurentSeries(self.low - 1, coeffs, self.order - 1)

    def shift(self, m: int) -> "LaurentSeries":
        """Multiply by z^m for integer m."""
        return LaurentSeries(self.low + m, list(self.coeffs), self.order + m)

    def truncate(self, order: int) -> "LaurentSeries":
        if order > self.order:
            raise TruncationError(
                f"cannot extend trusted order {self.order} to {order}"
            )
        return LaurentSeries(min(self.low, order), self.coeffs[: order - self.low], order)

    def substitute(self, mapping) -> "LaurentSeries":
        return LaurentSeries(
            self.low, [c.substitute(mapping) for c in self.coeffs], self.order
        )

    def equal_to(self, other: "LaurentSeries") -> bool:
        """Equality of all coefficients on the common trusted range."""
        order = min(self.order, other.order)
        low = min(self.low, other.low)
        for k in range(low, order):
            if self.coefficient(k) != other.coefficient(k):
                return False
        return True

    def text(self) -> str:
        s = self.normalized()
        if s.is_zero_to_order():
            return f"O(z^{self.order})"
        inner = []
        for k in range(s.low, s.order):
            c = s.coeffs[k - s.low]
            if c.is_zero():
                continue
            body = c.text()
            if " " in body or body.startswith("-"):
                body = f"({body})"
            off = k - s.low
            if off == 0:
                inner.append(body)
            elif off == 1:
                inner.append(f"{body}*z")
            else:
                inner.append(f"{body}*z^{off}")
        head = f"z^{s.low}*(" if s.low != 0 else "("
        return head + " + ".join(inner) + f") + O(z^{s.order})"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"LaurentSeries({self.text()})"


class ShiftedSeries:
    """z^m * (Laurent series), with a possibly symbolic exponent m.

    Supports the odd corner of the series arithmetic contract: the shift
    exponent may be a polynomial (e.g. an index), and differentiation then
    multiplies coefficients by the symbolic exponent m + k.
    """

    __slots__ = ("expo", "series")

    def __init__(self, expo, series: LaurentSeries):
        if not isinstance(expo, MultiPoly):
            expo = MultiPoly.const(as_rat(expo))
        self.expo = expo
        self.series = series

    def differentiate(self) -> "ShiftedSeries":
        coeffs = []
        for k in range(self.series.low, self.series.order):
            factor = self.expo + Rat(k)
            coeffs.append(self.series.coeffs[k - self.series.low] * factor)
        return ShiftedSeries(
            self.expo, LaurentSeries(self.series.low - 1, coeffs, self.series.order - 1)
        )

    def __mul__(self, other):
        if isinstance(other, ShiftedSeries):
            return ShiftedSeries(self.expo + other.expo, self.series * other.series)
        return ShiftedSeries(self.expo, self.series * other)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ShiftedSeries) or not (self.expo - other.expo).is_zero():
            raise ValueError("can only add shifted series with equal shift exponents")
        return ShiftedSeries(self.expo, self.series + other.series)

    def coefficient(self, k: int) -> MultiPoly:
        """Coefficient of z^(m+k)."""
        return self.series.coefficient(k)


def wp_series(K: int, g2=None, g3=None) -> LaurentSeries:
    """Weierstrass P as a Laurent series, trusted through z^(K-1).

    Coefficients are polynomials in g2, g3 determined by the defining
    relation (P')^2 = 4 P^3 - g2 P - g3:
    P = z^-2 + sum_{k>=2} c_k z^(2k-2), c_2 = g2/20, c_3 = g3/28,
    c_k = 3 (sum_{m=2}^{k-2} c_m c_{k-m}) / ((2k+1)(k-3)) for k >= 4.
    """
    if K < 0:
        raise ValueError("K must be nonnegative")
    if g2 is None:
        g2 = MultiPoly.var("g2")
    if g3 is None:
        g3 = MultiPoly.var("g3")
    kmax = (K + 1) // 2  # need c_k for 2k-2 <= K-1
    c = {2: _coerce_coeff(g2) * Rat(1, 20), 3: _coerce_coeff(g3) * Rat(1, 28)}
    for k in range(4, kmax + 1):
        s = MultiPoly.zero()
        for m in range(2, k - 1):
            s = s + c[m] * c[k - m]
        c[k] = s * Rat(3, (2 * k + 1) * (k - 3))
    d = {-2: MultiPoly.const(1)}
    for k in range(2, kmax + 1):
        if 2 * k - 2 < K:
            d[2 * k - 2] = c[k]
    return LaurentSeries.from_dict(d, K)


def wp_series_numeric(K: int, g2: complex, g3: complex):
    """Complex coefficient dict {exponent: coeff} of the P series."""
    kmax = (K + 1) // 2
    c = {2: g2 / 20.0, 3: g3 / 28.0}
    for k in range(4, kmax + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3.0 * s / ((2 * k + 1) * (k - 3))
    d = {-2: 1.0 + 0j}
    for k in range(2, kmax + 1):
        if 2 * k - 2 < K:
            d[2 * k - 2] = complex(c[k])
    return d
