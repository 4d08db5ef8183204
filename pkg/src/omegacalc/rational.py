"""Rational functions P(o)/Q(o) and their Laurent expansions.

This is the field generated over the rationals by ``o`` alone (with
``S = 1/o``).  Every element expands into a unique series: when the
denominator has a zero at ``o = 0`` its o-power factors out as S-powers.
The expansion is a field embedding, so comparison is routed through it
rather than through cross-multiplication, reusing the one lexicographic
order implementation.

The truncation sequence of any finite value is a Cauchy sequence of
polynomials converging to it, which `completion_demo` materializes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .errors import DivisionByZero, NotInRo
from .omega import DEFAULT_ORDER, OmegaNumber, Rational, _frac, compare

Poly = tuple[Fraction, ...]


def _poly(coeffs) -> Poly:
    out = [_frac(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _poly(
        [
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(n)
        ]
    )


def _poly_neg(a: Poly) -> Poly:
    return tuple(-c for c in a)


def _poly_mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly(out)


def _poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and any(c != 0 for c in r):
        shift = len(r) - len(b)
        factor = r[-1] / b[-1]
        q[shift] = factor
        for i, c in enumerate(b):
            r[i + shift] -= factor * c
        while r and r[-1] == 0:
            r.pop()
    return _poly(q), _poly(r)


def _poly_gcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    if a and a[-1] != 1:
        a = tuple(c / a[-1] for c in a)
    return a if a else (Fraction(1),)


@dataclass(frozen=True)
class RationalFunction:
    """Reduced fraction of o-polynomials with a monic-lead denominator."""

    num: Poly
    den: Poly

    @staticmethod
    def from_polys(num, den) -> "RationalFunction":
        n, d = _poly(num), _poly(den)
        if not d:
            raise DivisionByZero("zero denominator")
        if n:
            g = _poly_gcd(n, d)
            n = _poly_divmod(n, g)[0]
            d = _poly_divmod(d, g)[0]
        else:
            d = (Fraction(1),)
        lead = d[-1]
        n = tuple(c / lead for c in n)
        d = tuple(c / lead for c in d)
        return RationalFunction(n, d)

    @staticmethod
    def from_rational(value: Rational) -> "RationalFunction":
        return RationalFunction.from_polys([_frac(value)], [1])

    @staticmethod
    def o() -> "RationalFunction":
        return RationalFunction.from_polys([0, 1], [1])

    @staticmethod
    def sigma() -> "RationalFunction":
        return RationalFunction.from_polys([1], [0, 1])

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.from_polys(
            _poly_add(_poly_mul(self.num, other.den), _poly_mul(other.num, self.den)),
            _poly_mul(self.den, other.den),
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(_poly_neg(self.num), self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.from_polys(
            _poly_mul(self.num, other.num), _poly_mul(self.den, other.den)
        )

    def invert(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return RationalFunction.from_polys(self.den, self.num)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.invert()

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.invert() ** (-n)
        out = RationalFunction.from_rational(1)
        for _ in range(n):
            out = out * self
        return out


def expand(rf: RationalFunction, order: int | None = None) -> OmegaNumber:
    """Laurent expansion of P/Q to the requested order.

    Factors the denominator's o-power into S-powers, then divides by
    increasing powers.  Terminating divisions give an exact value;
    otherwise the result carries its truncation order.
    """
    target = order if order is not None else DEFAULT_ORDER
    if rf.is_zero():
        return OmegaNumber.zero()
    den_val = next(i for i, c in enumerate(rf.den) if c != 0)
    den = list(rf.den[den_val:])
    # series coefficients of num/den up to o^(target + den_val)
    steps = target + den_val
    if steps < 0:
        return OmegaNumber.from_terms({}, known_order=target)
    remainder = {i: c for i, c in enumerate(rf.num) if c != 0}
    series: list[Fraction] = []
    for j in range(steps + 1):
        c = remainder.pop(j, Fraction(0)) / den[0]
        series.append(c)
        if c != 0:
            for i, d in enumerate(den[1:], start=1):
                e = j + i
                v = remainder.get(e, Fraction(0)) - c * d
                if v == 0:
                    remainder.pop(e, None)
                else:
                    remainder[e] = v
        if not remainder:
            break
    exact = not remainder
    terms = {j - den_val: c for j, c in enumerate(series)}
    return OmegaNumber.from_terms(terms, known_order=None if exact else target)


def rf_compare(a: RationalFunction, b: RationalFunction, order: int | None = None) -> int:
    """Order agreeing with the expansion order: 0 only on exact equality."""
    if a == b:
        return 0
    return compare(expand(a, order), expand(b, order))


def completion_demo(target: OmegaNumber, upto: int | None = None) -> list[RationalFunction]:
    """Successive truncations of a finite value, as polynomials.

    The returned sequence is Cauchy and converges to the value; it
    stabilizes immediately when the value is already a polynomial.
    """
    if target.valuation is not None and target.valuation < 0:
        raise NotInRo("completion demo is for finite values")
    if upto is None:
        upto = target.known_order if target.known_order is not None else DEFAULT_ORDER
    out = []
    for n in range(upto + 1):
        coeffs = [Fraction(0)] * (n + 1)
        for e, c in target.terms():
            if 0 <= e <= n:
                coeffs[e] = c
        out.append(RationalFunction.from_polys(coeffs, [1]))
    return out
