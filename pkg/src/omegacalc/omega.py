"""Exact truncated Laurent series in the infinitesimal ``o``.

``OmegaNumber`` is the single numeric type of the library.  A value is a
finite window of exactly-known rational coefficients of powers of ``o``
(negative powers are powers of the infinite unit ``S = 1/o``), plus a
``known_order`` marking where exact knowledge stops.  ``known_order is
None`` means the value is exact to every order (a Laurent polynomial);
``known_order == N`` means every coefficient of ``o^k`` with ``k <= N``
is exact and nothing is known beyond, written ``+ O(o^(N+1))``.

The total order is lexicographic by increasing o-exponent, so S-powers
dominate constants dominate o-powers: ``0 < o << 1 << S``.  Comparison
never guesses across an unknown tail; it raises
``IndistinguishableAtTruncation`` instead.

All values are immutable and all operations are pure functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import (
    DivisionByZero,
    DomainError,
    IndistinguishableAtTruncation,
    NoStabilization,
    NonRepresentableBase,
    NotInRo,
    OrderExceedsKnown,
    TruncationUnderflow,
)

#: Working order used when an operation must truncate an infinite series
#: and the caller did not say how far to go.
DEFAULT_ORDER = 8

Rational = Union[int, Fraction, str]

LESS, EQUAL, GREATER = -1, 0, 1


class _InfiniteOrder:
    """Distinguished value of ``ord(0)``: greater than every integer."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __gt__(self, other):
        return not isinstance(other, _InfiniteOrder)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _InfiniteOrder)

    def __repr__(self):
        return "INFINITE_ORDER"


INFINITE_ORDER = _InfiniteOrder()


def _frac(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def _min_order(*orders: int | None) -> int | None:
    finite = [k for k in orders if k is not None]
    return min(finite) if finite else None


@dataclass(frozen=True)
class OmegaNumber:
    """Canonical truncated Laurent series.

    ``coeffs[i]`` is the coefficient of ``o**(valuation + i)``.  The
    first and last stored coefficients are nonzero; the canonical zero
    stores nothing and carries ``valuation is None``.  Structural
    equality (``==``) is representation equality; use :func:`compare`
    for the numeric order.
    """

    valuation: int | None
    coeffs: tuple[Fraction, ...]
    known_order: int | None

    def __post_init__(self):
        if self.coeffs:
            if self.valuation is None:
                raise ValueError("nonzero value needs a valuation")
            if self.coeffs[0] == 0 or self.coeffs[-1] == 0:
                raise ValueError("stored window must start and end nonzero")
            top = self.valuation + len(self.coeffs) - 1
            if self.known_order is not None and top > self.known_order:
                raise ValueError("stored terms extend past the known order")
        elif self.valuation is not None:
            raise ValueError("zero carries no valuation")

    # -- construction ------------------------------------------------

    @staticmethod
    def from_terms(
        terms: Mapping[int, Rational] | Iterable[tuple[int, Rational]],
        known_order: int | None = None,
    ) -> "OmegaNumber":
        """Build a canonical value from sparse exponent -> coefficient data.

        Coefficients are reduced, zeros dropped, and any term beyond
        ``known_order`` is discarded (it would sit inside the unknown
        tail).
        """
        items = terms.items() if isinstance(terms, Mapping) else terms
        dense: dict[int, Fraction] = {}
        for exponent, coefficient in items:
            c = _frac(coefficient)
            if c == 0:
                continue
            if known_order is not None and exponent > known_order:
                continue
            dense[exponent] = dense.get(exponent, Fraction(0)) + c
        dense = {e: c for e, c in dense.items() if c != 0}
        if not dense:
            return OmegaNumber(None, (), known_order)
        lo, hi = min(dense), max(dense)
        coeffs = tuple(dense.get(e, Fraction(0)) for e in range(lo, hi + 1))
        return OmegaNumber(lo, coeffs, known_order)

    @staticmethod
    def from_rational(value: Rational) -> "OmegaNumber":
        return OmegaNumber.from_terms({0: _frac(value)})

    @staticmethod
    def zero() -> "OmegaNumber":
        return OmegaNumber(None, (), None)

    @staticmethod
    def one() -> "OmegaNumber":
        return OmegaNumber.from_rational(1)

    @staticmethod
    def o(exponent: int = 1) -> "OmegaNumber":
        """The monomial ``o**exponent`` (use a negative exponent for S-powers)."""
        return OmegaNumber.from_terms({exponent: 1})

    @staticmethod
    def sigma(power: int = 1) -> "OmegaNumber":
        """The infinite unit ``S**power = o**(-power)``."""
        return OmegaNumber.from_terms({-power: 1})

    # -- basic queries -----------------------------------------------

    def is_zero(self) -> bool:
        """True when no nonzero coefficient is known (exact zero or O(...))."""
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.known_order is None

    def is_infinitesimal(self) -> bool:
        """True when the value is known to have no coefficient at or below o^0."""
        if self.is_zero():
            return self.known_order is None or self.known_order >= 0
        return self.valuation >= 1

    def coefficient(self, exponent: int) -> Fraction:
        """Exact coefficient of ``o**exponent``; raises if it is unknown."""
        if self.known_order is not None and exponent > self.known_order:
            raise IndistinguishableAtTruncation(
                f"coefficient of o^{exponent} is beyond known order {self.known_order}"
            )
        if self.valuation is None:
            return Fraction(0)
        i = exponent - self.valuation
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def terms(self) -> Iterator[tuple[int, Fraction]]:
        """Stored nonzero terms as (exponent, coefficient), ascending."""
        if self.valuation is None:
            return
        for i, c in enumerate(self.coeffs):
            if c != 0:
                yield self.valuation + i, c

    def ord(self):
        """Valuation: least o-exponent with a nonzero coefficient.

        Returns :data:`INFINITE_ORDER` for the exact zero.  For an
        inexact zero the valuation is not determined by the known
        window, so this raises.
        """
        if self.coeffs:
            return self.valuation
        if self.is_exact():
            return INFINITE_ORDER
        raise IndistinguishableAtTruncation(
            "ord is undetermined: all known coefficients vanish but the tail is unknown"
        )

    def standard_part(self) -> Fraction:
        """The o^0 coefficient of a finite value."""
        if self.valuation is not None and self.valuation < 0:
            raise NotInRo("infinite value has no standard part")
        if self.is_zero() and not self.is_exact() and self.known_order < 0:
            raise IndistinguishableAtTruncation("constant coefficient is unknown")
        return self.coefficient(0)

    def infinitesimal_part(self) -> "OmegaNumber":
        return self - OmegaNumber.from_rational(self.standard_part())

    def truncate(self, order: int) -> "OmegaNumber":
        """Drop all terms above ``o**order`` and forget the tail."""
        if self.known_order is not None and order > self.known_order:
            raise OrderExceedsKnown(
                f"cannot truncate at {order}: known only to {self.known_order}"
            )
        return OmegaNumber.from_terms(dict(self.terms()), known_order=order)

    # -- ring operations ---------------------------------------------

    def _coerced(self, other) -> "OmegaNumber | None":
        if isinstance(other, OmegaNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return OmegaNumber.from_rational(other)
        return None

    def __add__(self, other) -> "OmegaNumber":
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        ko = _min_order(self.known_order, rhs.known_order)
        merged = dict(self.terms())
        for e, c in rhs.terms():
            merged[e] = merged.get(e, Fraction(0)) + c
        return OmegaNumber.from_terms(merged, known_order=ko)

    __radd__ = __add__

    def __neg__(self) -> "OmegaNumber":
        return OmegaNumber(self.valuation, tuple(-c for c in self.coeffs), self.known_order)

    def __sub__(self, other) -> "OmegaNumber":
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other) -> "OmegaNumber":
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return rhs + (-self)

    def __mul__(self, other) -> "OmegaNumber":
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        if (self.is_zero() and self.is_exact()) or (rhs.is_zero() and rhs.is_exact()):
            return OmegaNumber.zero()
        if self.is_zero() or rhs.is_zero():
            # O(o^(k+1)) scaled by a value of valuation v is O(o^(k+1+v)).
            def effective_valuation(x: OmegaNumber) -> int:
                return x.valuation if x.coeffs else x.known_order + 1

            ko = effective_valuation(self) + effective_valuation(rhs) - 1
            return OmegaNumber(None, (), ko)
        ko = _min_order(
            None if self.known_order is None else self.known_order + rhs.valuation,
            None if rhs.known_order is None else rhs.known_order + self.valuation,
        )
        out: dict[int, Fraction] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms(), rhs.terms()):
            e = e1 + e2
            if ko is not None and e > ko:
                continue
            out[e] = out.get(e, Fraction(0)) + c1 * c2
        result = OmegaNumber.from_terms(out, known_order=ko)
        if ko is not None and result.valuation is not None and ko < result.valuation:
            raise TruncationUnderflow("no exactly-known coefficient remains")
        return result

    __rmul__ = __mul__

    def __truediv__(self, other) -> "OmegaNumber":
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return self * rhs.invert()

    def __rtruediv__(self, other) -> "OmegaNumber":
        rhs = self._coerced(other)
        if rhs is None:
            return NotImplemented
        return rhs * self.invert()

    def __pow__(self, exponent: int) -> "OmegaNumber":
        if not isinstance(exponent, int):
            return NotImplemented
        return self.pow_rational(exponent)

    def _leading_split(self) -> tuple[Fraction, int, "OmegaNumber"]:
        """Factor a nonzero value as a*o^v*(1+u) with u infinitesimal."""
        a, v = self.coeffs[0], self.valuation
        rel_ko = None if self.known_order is None else self.known_order - v
        u = OmegaNumber.from_terms(
            {i: c / a for i, c in enumerate(self.coeffs) if i > 0},
            known_order=rel_ko,
        )
        return a, v, u

    def invert(self, order: int | None = None) -> "OmegaNumber":
        """Multiplicative inverse, truncated at ``order`` when infinite.

        The propagated knowledge never exceeds ``known_order - 2*valuation``;
        ``order`` can only lower it further.
        """
        if self.is_zero():
            if self.is_exact():
                raise DivisionByZero("inverse of zero")
            raise TruncationUnderflow("no known leading coefficient to invert")
        a, v, u = self._leading_split()
        propagated = None if self.known_order is None else self.known_order - 2 * v
        target = _min_order(order, propagated)
        monomial = OmegaNumber.from_terms({-v: 1 / a})
        if u.is_zero() and u.is_exact():
            # The inverse of an exact monomial is exact; `order` only caps
            # series expansion, it never discards finite knowledge.
            return monomial if propagated is None else monomial.truncate(propagated)
        if target is None:
            target = DEFAULT_ORDER
        rel = target + v
        if rel < 0:
            raise TruncationUnderflow("requested order is below the inverse's valuation")
        geometric = _geometric_sum(-u, rel)
        return (monomial * geometric).truncate(target)

    def pow_rational(self, alpha: Rational, order: int | None = None) -> "OmegaNumber":
        """``self**alpha`` for a rational exponent.

        Integer exponents work for any invertible value.  Fractional
        exponents require a positive standard leading coefficient whose
        alpha-th power is rational (otherwise the result has no exact
        representation here).
        """
        alpha = _frac(alpha)
        if alpha.denominator == 1:
            return self._int_pow(alpha.numerator, order)
        if self.is_zero():
            raise DomainError("fractional power of zero")
        if self.valuation != 0:
            raise DomainError(
                "fractional powers need a standard leading term (valuation 0)"
            )
        t = self.coeffs[0]
        if t <= 0:
            raise DomainError("fractional powers need a positive leading coefficient")
        t_alpha = rational_root_power(t, alpha)
        _, _, u = self._leading_split()
        target = _min_order(order, self.known_order)
        if target is None:
            target = DEFAULT_ORDER
        total = OmegaNumber.zero()
        u_pow = OmegaNumber.one()
        binom = Fraction(1)
        for k in range(target + 1):
            if k > 0:
                binom *= (alpha - (k - 1)) / k
                u_pow = u_pow * u
                if u_pow.is_zero() and u_pow.is_exact():
                    break
                u_pow = u_pow.truncate(_min_order(target, u_pow.known_order))
            total = total + u_pow * binom
        total = total * t_alpha
        return total.truncate(_min_order(target, total.known_order))

    def _int_pow(self, n: int, order: int | None) -> "OmegaNumber":
        if n == 0:
            return OmegaNumber.one()
        base = self if n > 0 else self.invert(order)
        result = OmegaNumber.one()
        for _ in range(abs(n)):
            result = result * base
        return result

    # -- rendering ----------------------------------------------------

    def __str__(self) -> str:
        return render_plain(self)

    def __repr__(self) -> str:
        return f"OmegaNumber({render_plain(self)!r})"


def _geometric_sum(r: OmegaNumber, relative_order: int) -> OmegaNumber:
    """1 + r + r^2 + ... truncated at o^relative_order (ord(r) >= 1)."""
    total = OmegaNumber.one()
    power = OmegaNumber.one()
    for _ in range(relative_order):
        power = (power * r)
        if power.is_zero() and power.is_exact():
            break
        power = power.truncate(_min_order(relative_order, power.known_order))
        total = total + power
    return total


def _integer_root(value: int, degree: int) -> int | None:
    """Exact nonnegative degree-th root of a nonnegative int, else None."""
    if value < 0:
        return None
    if value in (0, 1) or degree == 1:
        return value
    lo, hi = 0, 1
    while hi**degree <= value:
        hi *= 2
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**degree <= value:
            lo = mid
        else:
            hi = mid - 1
    return lo if lo**degree == value else None


def rational_root_power(t: Fraction, alpha: Fraction) -> Fraction:
    """Exact value of t**alpha, or NonRepresentableBase if irrational."""
    t = _frac(t)
    alpha = _frac(alpha)
    if t <= 0:
        raise DomainError("base must be positive")
    num_root = _integer_root(t.numerator, alpha.denominator)
    den_root = _integer_root(t.denominator, alpha.denominator)
    if num_root is None or den_root is None:
        raise NonRepresentableBase(f"{t}^{alpha} is irrational")
    return Fraction(num_root, den_root) ** alpha.numerator


# ---------------------------------------------------------------------------
# Module-level operation surface
# ---------------------------------------------------------------------------


def normalize(
    terms: Mapping[int, Rational] | Iterable[tuple[int, Rational]],
    known_order: int | None = None,
) -> OmegaNumber:
    """Canonicalize sparse exponent -> rational data (see OmegaNumber.from_terms)."""
    return OmegaNumber.from_terms(terms, known_order)


def compare(x: OmegaNumber, y: OmegaNumber) -> int:
    """Three-way lexicographic comparison: -1, 0 or +1.

    0 is returned only when both sides are exact and identical; if all
    known coefficients agree while an unknown tail remains, the order is
    genuinely undetermined and IndistinguishableAtTruncation is raised.
    """
    d = x - y
    if not d.is_zero():
        return GREATER if d.coeffs[0] > 0 else LESS
    if d.is_exact():
        return EQUAL
    raise IndistinguishableAtTruncation(
        f"values agree through o^{d.known_order} and differ only in unknown tails"
    )


def much_less(x: OmegaNumber, y: OmegaNumber) -> bool:
    """``x << y``: every standard multiple of |x| stays below |y|.

    Equivalent to ord(x) > ord(y) for nonzero arguments.
    """
    if y.is_zero():
        if y.is_exact():
            return False
        raise IndistinguishableAtTruncation("ord of the right side is unknown")
    if x.is_zero():
        if x.is_exact():
            return True
        # |x| < o^k for the known k, but y's valuation may be even deeper.
        if x.known_order >= y.valuation:
            return True
        raise IndistinguishableAtTruncation("ord of the left side is unknown")
    return x.valuation > y.valuation


def pow_rational(x: OmegaNumber, alpha: Rational, order: int | None = None) -> OmegaNumber:
    return x.pow_rational(alpha, order)


# ---------------------------------------------------------------------------
# Extended values: one +/-infinite moment closes an infinitesimal cut
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedOmega:
    """An exact prefix terminated by a ``+inf`` or ``-inf`` moment.

    These points (``eps = +inf*o`` and friends) close the infinitesimal
    cuts of the plain numbers.  They support comparison only; they have
    no arithmetic.
    """

    prefix: OmegaNumber
    position: int | None = None
    sign: int = 0

    def __post_init__(self):
        if self.position is not None:
            if self.sign not in (-1, 1):
                raise DomainError("infinite moment sign must be +1 or -1")
            if not self.prefix.is_exact():
                raise DomainError("prefix of an extended value must be exact")
            for e, _ in self.prefix.terms():
                if e >= self.position:
                    raise DomainError(
                        "finite coefficients may not sit at or beyond the infinite moment"
                    )

    @staticmethod
    def epsilon(position: int = 1, sign: int = 1) -> "ExtendedOmega":
        """``+inf * o**position`` (the default is eps = +inf*o)."""
        return ExtendedOmega(OmegaNumber.zero(), position, sign)

    @staticmethod
    def wrap(value: "OmegaNumber | ExtendedOmega") -> "ExtendedOmega":
        if isinstance(value, ExtendedOmega):
            return value
        return ExtendedOmega(value)

    def __str__(self) -> str:
        return render_plain(self)


def compare_extended(
    x: OmegaNumber | ExtendedOmega, y: OmegaNumber | ExtendedOmega
) -> int:
    """Lexicographic order on extended values.

    At its position an infinite moment beats every finite coefficient
    but is still dominated by everything at lower exponents.
    """
    ex, ey = ExtendedOmega.wrap(x), ExtendedOmega.wrap(y)
    if ex.position is None and ey.position is None:
        return compare(ex.prefix, ey.prefix)

    exponents = {e for e, _ in ex.prefix.terms()} | {e for e, _ in ey.prefix.terms()}
    for p in (ex.position, ey.position):
        if p is not None:
            exponents.add(p)
    for e in sorted(exponents):
        vx = _extended_value_at(ex, e)
        vy = _extended_value_at(ey, e)
        if vx is None or vy is None:
            raise IndistinguishableAtTruncation(
                f"coefficient of o^{e} is unknown on one side"
            )
        if vx == vy:
            continue
        order = {"-inf": 0, "fin": 1, "+inf": 2}
        kx, ky = vx[0], vy[0]
        if kx == ky == "fin":
            return GREATER if vx[1] > vy[1] else LESS
        return GREATER if order[kx] > order[ky] else LESS
    if ex.prefix.is_exact() and ey.prefix.is_exact():
        return EQUAL
    raise IndistinguishableAtTruncation("extended values agree on all known moments")


def _extended_value_at(x: ExtendedOmega, exponent: int):
    if x.position is not None and exponent == x.position:
        return ("+inf", None) if x.sign > 0 else ("-inf", None)
    if x.position is not None and exponent > x.position:
        return ("fin", Fraction(0))
    if x.prefix.known_order is not None and exponent > x.prefix.known_order:
        return None
    return ("fin", x.prefix.coefficient(exponent))


def sup_finite(
    values: Sequence[OmegaNumber | ExtendedOmega],
) -> OmegaNumber | ExtendedOmega:
    """Supremum of a nonempty finite set: its maximum, since the order is total."""
    if not values:
        raise DomainError("sup of an empty set")
    best = values[0]
    for v in values[1:]:
        if compare_extended(v, best) > 0:
            best = v
    return best


# ---------------------------------------------------------------------------
# Completeness: limits of sequences whose moments stabilize
# ---------------------------------------------------------------------------


def cauchy_limit(
    sequence: Iterable[OmegaNumber],
    order: int,
    max_steps: int = 200,
    window: int = 3,
) -> OmegaNumber:
    """Limit of a sequence whose moments 0..order eventually stabilize.

    The sequence is inspected until ``window`` consecutive elements share
    the same truncation at ``order``; that truncation is the limit to the
    requested order.  The step budget is an artifact contract: genuine
    Cauchy-ness cannot be decided from finitely many terms.
    """
    streak: OmegaNumber | None = None
    count = 0
    seen = 0
    for element in itertools.islice(sequence, max_steps):
        seen += 1
        t = element.truncate(order)
        if streak is not None and t == streak:
            count += 1
        else:
            streak, count = t, 1
        if count >= window:
            return streak
    if streak is not None and count == seen:
        return streak  # sequence exhausted while constant throughout
    raise NoStabilization(
        f"moments 0..{order} did not stabilize within {max_steps} steps"
    )


# ---------------------------------------------------------------------------
# Canonical rendering and JSON encoding
# ---------------------------------------------------------------------------


def _symbol(exponent: int) -> str | None:
    if exponent == 0:
        return None
    if exponent == 1:
        return "o"
    if exponent > 1:
        return f"o^{exponent}"
    if exponent == -1:
        return "S"
    return f"S^{-exponent}"


def _term_body(coefficient: Fraction, exponent: int) -> str:
    sym = _symbol(exponent)
    magnitude = abs(coefficient)
    if sym is None:
        return str(magnitude)
    if magnitude == 1:
        return sym
    return f"{magnitude}*{sym}"


def _moment_body(position: int) -> str:
    sym = _symbol(position)
    return "inf" if sym is None else f"inf*{sym}"


def render_plain(value: OmegaNumber | ExtendedOmega) -> str:
    """Canonical text form: terms by increasing o-exponent, exact fractions."""
    if isinstance(value, ExtendedOmega):
        number, position, sign = value.prefix, value.position, value.sign
    else:
        number, position, sign = value, None, 0
    pieces: list[tuple[int, str]] = [(1 if c > 0 else -1, _term_body(c, e))
                                     for e, c in number.terms()]
    if position is not None:
        pieces.append((sign, _moment_body(position)))
    if not pieces:
        if number.known_order is None:
            return "0"
        return f"O(o^{number.known_order + 1})"
    out = []
    for i, (sgn, body) in enumerate(pieces):
        if i == 0:
            out.append(f"-{body}" if sgn < 0 else body)
        else:
            out.append(f" - {body}" if sgn < 0 else f" + {body}")
    if position is None and number.known_order is not None:
        out.append(f" + O(o^{number.known_order + 1})")
    return "".join(out)


def to_json_dict(value: OmegaNumber | ExtendedOmega) -> dict:
    """Bit-exact JSON encoding shared by the CLI."""
    if isinstance(value, ExtendedOmega):
        number = value.prefix
        moment = (
            None
            if value.position is None
            else {"position": value.position, "sign": value.sign}
        )
    else:
        number, moment = value, None
    return {
        "valuation": number.valuation,
        "coefficients": [[c.numerator, c.denominator] for c in number.coeffs],
        "known_order": number.known_order,
        "infinite_moment": moment,
    }


def from_json_dict(data: Mapping) -> OmegaNumber | ExtendedOmega:
    coeffs = [Fraction(n, d) for n, d in data["coefficients"]]
    valuation = data["valuation"]
    terms = {} if valuation is None else {valuation + i: c for i, c in enumerate(coeffs)}
    number = OmegaNumber.from_terms(terms, known_order=data["known_order"])
    moment = data.get("infinite_moment")
    if moment is None:
        return number
    return ExtendedOmega(number, moment["position"], moment["sign"])
