"""Regular functions: exact coefficient streams around a standard base point.

A ``RegularFunction`` is determined by a rational base point and a total
map ``n -> coeff(n)`` of series coefficients, which may themselves carry
infinitesimal parts.  Polynomials (finite ``degree``) evaluate exactly
anywhere; genuinely infinite streams evaluate at infinitesimal
displacements from the base point, truncated at a working order, which
is enough because ``u**k`` only contributes from ``o**k`` upward.

Derivatives act on the standard part of the argument: the stream of the
q-th derivative is ``(n+q)!/n! * coeff(n+q)``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    DomainError,
    NotInfinitesimal,
    OmegaError,
    SeedMismatch,
    SingularDerivative,
    UnsupportedBasePoint,
)
from .omega import (
    DEFAULT_ORDER,
    OmegaNumber,
    Rational,
    _frac,
    _min_order,
    rational_root_power,
)


def _as_omega(value) -> OmegaNumber:
    if isinstance(value, OmegaNumber):
        return value
    return OmegaNumber.from_rational(value)


class RegularFunction:
    """Coefficient stream with a memoized, lock-guarded cache.

    ``degree`` is None for an infinite stream; a finite degree promises
    coeff(n) == 0 for n > degree and unlocks exact evaluation at
    arbitrary displacements.
    """

    def __init__(
        self,
        coeff_fn: Callable[[int], OmegaNumber],
        base_point: Rational = 0,
        radius: Rational | None = None,
        name: str = "f",
        degree: int | None = None,
    ):
        self._coeff_fn = coeff_fn
        self.base_point = _frac(base_point)
        self.radius = None if radius is None else _frac(radius)
        self.name = name
        self.degree = degree
        self._cache: dict[int, OmegaNumber] = {}
        self._lock = threading.Lock()

    @staticmethod
    def polynomial(
        coeffs: Sequence[OmegaNumber | Rational],
        base_point: Rational = 0,
        name: str | None = None,
    ) -> "RegularFunction":
        fixed = [_as_omega(c) for c in coeffs]
        if name is None:
            name = "poly"
        return RegularFunction(
            lambda n: fixed[n] if n < len(fixed) else OmegaNumber.zero(),
            base_point=base_point,
            name=name,
            degree=max(len(fixed) - 1, 0),
        )

    @staticmethod
    def monomial(m: int) -> "RegularFunction":
        """x**m at base point 0."""
        return RegularFunction.polynomial([0] * m + [1], name=f"p_{m}")

    @staticmethod
    def constant(value: OmegaNumber | Rational) -> "RegularFunction":
        return RegularFunction.polynomial([value], name="const")

    def coeff(self, n: int) -> OmegaNumber:
        if n < 0:
            raise ValueError("coefficient index must be nonnegative")
        if self.degree is not None and n > self.degree:
            return OmegaNumber.zero()
        with self._lock:
            if n not in self._cache:
                self._cache[n] = _as_omega(self._coeff_fn(n))
            return self._cache[n]

    # -- evaluation ----------------------------------------------------

    def eval(self, u: OmegaNumber | Rational, order: int | None = None) -> OmegaNumber:
        """Value at the point base_point + u."""
        u = _as_omega(u)
        if self.degree is not None:
            return self._eval_polynomial(u, order)
        if not u.is_infinitesimal():
            raise NotInfinitesimal(
                "infinite coefficient streams evaluate only inside the "
                "infinitesimal cut of their base point"
            )
        if self.radius is not None and abs(u.standard_part()) >= self.radius:
            raise DomainError("displacement leaves the declared radius")
        target = order
        if target is None:
            target = u.known_order if u.known_order is not None else DEFAULT_ORDER
        total = self.coeff(0)
        u_pow = OmegaNumber.one()
        for k in range(1, target + 1):
            u_pow = u_pow * u
            if u_pow.is_zero() and u_pow.is_exact():
                break
            u_pow = u_pow.truncate(_min_order(target, u_pow.known_order))
            total = total + self.coeff(k) * u_pow
        return total.truncate(_min_order(target, total.known_order))

    def _eval_polynomial(self, u: OmegaNumber, order: int | None) -> OmegaNumber:
        # Exact: the working order never discards finite knowledge.
        total = OmegaNumber.zero()
        for n in range(self.degree, -1, -1):  # Horner
            total = total * u + self.coeff(n)
        return total

    # -- pointwise algebra (used by tests and operator plumbing) --------

    def _require_same_base(self, other: "RegularFunction"):
        if self.base_point != other.base_point:
            raise ValueError("functions have different base points")

    def __add__(self, other: "RegularFunction") -> "RegularFunction":
        self._require_same_base(other)
        degree = None
        if self.degree is not None and other.degree is not None:
            degree = max(self.degree, other.degree)
        return RegularFunction(
            lambda n: self.coeff(n) + other.coeff(n),
            base_point=self.base_point,
            name=f"({self.name}+{other.name})",
            degree=degree,
        )

    def __mul__(self, other: "RegularFunction") -> "RegularFunction":
        self._require_same_base(other)
        degree = None
        if self.degree is not None and other.degree is not None:
            degree = self.degree + other.degree
        return RegularFunction(
            lambda n: sum(
                (self.coeff(i) * other.coeff(n - i) for i in range(n + 1)),
                OmegaNumber.zero(),
            ),
            base_point=self.base_point,
            name=f"({self.name}*{other.name})",
            degree=degree,
        )

    def scale(self, factor: OmegaNumber | Rational) -> "RegularFunction":
        factor = _as_omega(factor)
        return RegularFunction(
            lambda n: self.coeff(n) * factor,
            base_point=self.base_point,
            name=self.name,
            degree=self.degree,
        )

    def __repr__(self) -> str:
        return f"RegularFunction({self.name!r} at {self.base_point})"


def eval_infinitesimal(
    F: RegularFunction, u: OmegaNumber | Rational, order: int | None = None
) -> OmegaNumber:
    return F.eval(u, order)


def derivative(F: RegularFunction, q: int = 1) -> RegularFunction:
    """q-th derivative with respect to the standard part of the argument."""
    if q < 0:
        raise ValueError("derivative order must be nonnegative")
    if q == 0:
        return F
    degree = None if F.degree is None else max(F.degree - q, 0)

    def coeff(n: int) -> OmegaNumber:
        factor = math.prod(range(n + 1, n + q + 1))
        return F.coeff(n + q) * factor

    return RegularFunction(
        coeff, base_point=F.base_point, radius=F.radius,
        name=f"{F.name}^({q})", degree=degree,
    )


def taylor_shift(
    F: RegularFunction, v: OmegaNumber | Rational, order: int | None = None
) -> RegularFunction:
    """The function u -> F(u + v) for an infinitesimal shift v.

    Coefficients become ``b_n = sum_q C(n+q, q) a_{n+q} v^q``; for a
    polynomial the sum is finite and exact, otherwise each coefficient
    is truncated at the working order.
    """
    v = _as_omega(v)
    if not v.is_infinitesimal():
        raise NotInfinitesimal("shift must be infinitesimal")
    if v.is_zero() and v.is_exact():
        return F
    target = order if order is not None else DEFAULT_ORDER

    def coeff(n: int) -> OmegaNumber:
        q_max = F.degree - n if F.degree is not None else target
        total = OmegaNumber.zero()
        v_pow = OmegaNumber.one()
        for q in range(q_max + 1):
            if q > 0:
                v_pow = v_pow * v
                if v_pow.is_zero() and v_pow.is_exact():
                    break
                if F.degree is None:
                    v_pow = v_pow.truncate(_min_order(target, v_pow.known_order))
            total = total + F.coeff(n + q) * math.comb(n + q, q) * v_pow
        if F.degree is None:
            total = total.truncate(_min_order(target, total.known_order))
        return total

    return RegularFunction(
        coeff, base_point=F.base_point, radius=F.radius,
        name=f"{F.name}@shift", degree=F.degree,
    )


# ---------------------------------------------------------------------------
# Named coefficient streams
# ---------------------------------------------------------------------------


def builtin(
    name: str, base_point: Rational | None = None, alpha: Rational | None = None
) -> RegularFunction:
    """Exact rational coefficient streams for the supported functions.

    exp/sin/cos at 0, log at 1, the geometric series 1/(1-x) at 0, and
    ``pow`` (x**alpha) at any positive rational base whose alpha-th power
    is rational.
    """
    base = None if base_point is None else _frac(base_point)
    if name == "exp":
        if base not in (None, Fraction(0)):
            raise UnsupportedBasePoint("exp has rational coefficients only at 0")
        return RegularFunction(
            lambda n: OmegaNumber.from_rational(Fraction(1, math.factorial(n))),
            name="exp", radius=None,
        )
    if name == "sin":
        if base not in (None, Fraction(0)):
            raise UnsupportedBasePoint("sin has rational coefficients only at 0")
        return RegularFunction(
            lambda n: OmegaNumber.from_rational(
                Fraction((-1) ** ((n - 1) // 2), math.factorial(n)) if n % 2 else 0
            ),
            name="sin", radius=None,
        )
    if name == "cos":
        if base not in (None, Fraction(0)):
            raise UnsupportedBasePoint("cos has rational coefficients only at 0")
        return RegularFunction(
            lambda n: OmegaNumber.from_rational(
                Fraction((-1) ** (n // 2), math.factorial(n)) if n % 2 == 0 else 0
            ),
            name="cos", radius=None,
        )
    if name == "log":
        if base not in (None, Fraction(1)):
            raise UnsupportedBasePoint("log has rational coefficients only at 1")
        return RegularFunction(
            lambda n: OmegaNumber.from_rational(
                0 if n == 0 else Fraction((-1) ** (n + 1), n)
            ),
            base_point=1, name="log", radius=1,
        )
    if name == "geometric":
        if base not in (None, Fraction(0)):
            raise UnsupportedBasePoint("the geometric series is taken at 0")
        return RegularFunction(
            lambda n: OmegaNumber.one(), name="geometric", radius=1
        )
    if name == "pow":
        if alpha is None:
            raise UnsupportedBasePoint("pow needs an exponent")
        a = _frac(alpha)
        t = Fraction(1) if base is None else base
        if t <= 0:
            raise UnsupportedBasePoint("pow needs a positive base point")
        t_alpha = rational_root_power(t, a)  # may raise NonRepresentableBase

        def coeff(n: int) -> OmegaNumber:
            binom = Fraction(1)
            for i in range(n):
                binom *= (a - i) / (i + 1)
            return OmegaNumber.from_rational(binom * t_alpha / t**n)

        return RegularFunction(
            coeff, base_point=t, name=f"pow_{a}", radius=t,
        )
    raise UnsupportedBasePoint(f"no builtin named {name!r}")


# ---------------------------------------------------------------------------
# Never-amplifying maps (the NS* condition)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NsStarReport:
    """Result of sampling the never-amplifies condition on point pairs."""

    passed: bool
    checked: int
    first_violation: tuple[OmegaNumber, OmegaNumber] | None


def ns_star_check(
    mapping: Callable[[OmegaNumber], OmegaNumber],
    samples: Sequence[tuple[OmegaNumber, OmegaNumber]],
) -> NsStarReport:
    """Check that |x2 - x1| << |F(x2) - F(x1)| never holds on the samples.

    A map passing this cannot turn an order-k infinitesimal difference
    into a lower-order one.
    """
    from .omega import much_less

    for i, (x1, x2) in enumerate(samples):
        dx = x2 - x1
        df = mapping(x2) - mapping(x1)
        if much_less(dx, df):
            return NsStarReport(False, i + 1, (x1, x2))
    return NsStarReport(True, len(samples), None)


# ---------------------------------------------------------------------------
# Coefficientwise equation solving
# ---------------------------------------------------------------------------


def solve_lift(
    F: RegularFunction,
    y: OmegaNumber | Rational,
    x_seed: Rational,
    order: int | None = None,
) -> OmegaNumber:
    """Solve F(x) = y moment by moment from a standard seed.

    Each new moment of x is forced by the previous ones as long as the
    standard derivative at the seed is nonzero.
    """
    y = _as_omega(y)
    seed = _frac(x_seed)
    d0 = OmegaNumber.from_rational(seed - F.base_point)
    if F.degree is None and not d0.is_zero():
        raise NotInfinitesimal("seed must equal the base point of an infinite stream")
    target = order if order is not None else DEFAULT_ORDER
    if F.eval(d0, order=0).standard_part() != y.standard_part():
        raise SeedMismatch("F(seed) and y have different standard parts")
    Fp = derivative(F, 1)
    if Fp.eval(d0, order=0).standard_part() == 0:
        raise SingularDerivative("standard derivative vanishes at the seed")

    u = OmegaNumber.zero()
    for _ in range(target + 2):
        value = F.eval(d0 + u, order=target)
        residual = (y - value).truncate(
            _min_order(target, _min_order(y.known_order, value.known_order))
        )
        if residual.is_zero():
            return OmegaNumber.from_rational(seed) + u
        slope = Fp.eval(d0 + u, order=target)
        u = (u + residual * slope.invert(order=target)).truncate(target)
    raise OmegaError("moment iteration failed to close")  # pragma: no cover


def lift_poly_root(
    poly: Sequence[OmegaNumber | Rational],
    x_seed: Rational,
    order: int | None = None,
) -> OmegaNumber:
    """Root of sum(poly[i] * z^i) = 0 lifted moment by moment from a
    standard simple root of the standard-part polynomial."""
    coeffs = [_as_omega(c) for c in poly]
    seed = _frac(x_seed)
    target = order if order is not None else DEFAULT_ORDER

    def value_at(z: OmegaNumber) -> OmegaNumber:
        total = OmegaNumber.zero()
        for c in reversed(coeffs):
            total = total * z + c
        return total

    def slope_at(z: OmegaNumber) -> OmegaNumber:
        total = OmegaNumber.zero()
        for i in range(len(coeffs) - 1, 0, -1):
            total = total * z + coeffs[i] * i
        return total

    z = OmegaNumber.from_rational(seed)
    if value_at(z).standard_part() != 0:
        raise SeedMismatch("seed is not a root of the standard-part equation")
    if slope_at(z).standard_part() == 0:
        raise SingularDerivative("standard derivative vanishes at the seed")
    for _ in range(target + 2):
        residual = value_at(z)
        if not (residual.is_zero() and residual.is_exact()):
            residual = residual.truncate(_min_order(target, residual.known_order))
        if residual.is_zero():
            return z
        z = (z - residual * slope_at(z).invert(order=target)).truncate(target)
    raise OmegaError("moment iteration failed to close")  # pragma: no cover
