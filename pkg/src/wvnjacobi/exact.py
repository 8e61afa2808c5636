"""Exact rational arithmetic: univariate polynomials, reduced rational
functions and real-root isolation by Sturm sequences.

Scalars are :class:`fractions.Fraction`.  Polynomials store coefficients
lowest power first; the zero polynomial has no coefficients and degree
``None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .errors import InvalidInput, PoleAtPoint

BigRat = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "BigRat",
    "Poly",
    "RatFunc",
    "RootBracket",
    "to_rational",
    "poly_gcd",
    "poly_real_roots",
    "isolate_real_roots",
    "rf_eval",
]


def to_rational(value) -> Fraction:
    """Parse ``int``, ``Fraction`` or a ``"p/q"`` / decimal string exactly."""
    if isinstance(value, bool):
        raise InvalidInput(f"not a rational number: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational number: {value!r}") from exc
    raise InvalidInput(f"not an exact rational: {value!r}")


class Poly:
    """Immutable polynomial with rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, value: Scalar) -> "Poly":
        return cls((value,))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int | None:
        return len(self._c) - 1 if self._c else None

    def is_zero(self) -> bool:
        return not self._c

    @property
    def lead(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self._c]})"

    def __str__(self) -> str:
        return format_poly(self)

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self._c), len(other._c))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self._c)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self._c or not other._c:
            return Poly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(other._c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dq = len(rem) - len(other._c)
        if dq < 0:
            return Poly(), self
        quo = [Fraction(0)] * (dq + 1)
        lead = other._c[-1]
        for k in range(dq, -1, -1):
            f = rem[k + len(other._c) - 1] / lead
            quo[k] = f
            if f:
                for j, b in enumerate(other._c):
                    rem[k + j] -= f * b
        return Poly(quo), Poly(rem[: len(other._c) - 1])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise InvalidInput("polynomial division is not exact")
        return q

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self._c):
            if isinstance(x, Fraction) or isinstance(x, int):
                acc = acc * x + c
            else:
                acc = acc * x + float(c)
        return acc

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self._c) if k > 0)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return Poly(c / self._c[-1] for c in self._c)

    def scale(self, s: Scalar) -> "Poly":
        return Poly(c * s for c in self._c)

    def integer_scaled(self) -> tuple[list[int], Fraction]:
        """Return (integer coefficients with unit content, factor) with
        ``self == factor * Poly(ints)`` and a positive leading integer."""
        if self.is_zero():
            return [], Fraction(0)
        den = reduce(lcm, (c.denominator for c in self._c), 1)
        ints = [int(c * den) for c in self._c]
        g = reduce(gcd, (abs(i) for i in ints), 0)
        if ints[-1] < 0:
            g = -g
        ints = [i // g for i in ints]
        return ints, Fraction(g, den)


_SUP = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def format_poly(p: Poly, var: str = "λ") -> str:
    """Render with descending powers, e.g. ``3λ²−3``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        sign = "−" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            body = "" if mag == 1 else (str(mag) if mag.denominator == 1 else f"({mag})")
            body += var + (str(k).translate(_SUP) if k > 1 else "")
        if not parts:
            parts.append(("−" if c < 0 else "") + body)
        else:
            parts.append(sign + body)
    return "".join(parts)


def poly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic greatest common divisor by the Euclidean algorithm."""
    if p.is_zero() and q.is_zero():
        raise InvalidInput("gcd of two zero polynomials is undefined")
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
        # keep coefficient sizes in check
        b = b.monic()
    return a.monic()


class RatFunc:
    """Reduced quotient ``num/den`` with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | Scalar, den: Poly | Scalar = 1):
        num = Poly._coerce(num)
        den = Poly._coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        else:
            g = poly_gcd(num, den)
            if g.degree:
                num, den = num.exact_div(g), den.exact_div(g)
            lead = den.lead
            num, den = num.scale(1 / lead), den.scale(1 / lead)
        self.num = num
        self.den = den

    @staticmethod
    def _coerce(other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return RatFunc(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    @property
    def order(self) -> int | None:
        """``deg num - deg den``; ``None`` for the zero function."""
        if self.num.is_zero():
            return None
        return self.num.degree - self.den.degree

    @property
    def leading_coeff(self) -> Fraction:
        return self.num.lead / self.den.lead

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            return rf_eval(self, Fraction(x))
        return self.num(x) / self.den(x)


def rf_eval(f: RatFunc, x: Scalar) -> Fraction:
    """Exact value of ``f`` at a rational point."""
    x = Fraction(x)
    d = f.den(x)
    if d == 0:
        raise PoleAtPoint(f"denominator vanishes at {x}")
    return f.num(x) / d


# ---------------------------------------------------------------------------
# Real-root isolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootBracket:
    """A real root known to lie in ``[lo, hi]`` (``lo == hi`` when exact)."""

    lo: Fraction
    hi: Fraction
    multiplicity: int

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def value(self) -> float:
        return float(self.mid)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def _sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        r = chain[-2] % chain[-1]
        if r.is_zero():
            break
        # positive rescaling keeps the signs of the negated remainder
        chain.append(-(r.scale(1 / abs(r.lead))))
    return chain


def _sign_changes(chain: Sequence[Poly], x: Fraction) -> int:
    count = 0
    prev = 0
    for p in chain:
        v = p(x)
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _root_bound(p: Poly) -> Fraction:
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def _isolate_squarefree(p: Poly, precision: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Brackets of width <= precision for the real roots of square-free ``p``.

    Sturm counts are over half-open intervals ``(a, b]``.
    """
    if p.degree is None or p.degree < 1:
        return []
    chain = _sturm_chain(p)
    bound = _root_bound(p)
    lo, hi = -bound, bound
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, _sign_changes(chain, lo), _sign_changes(chain, hi))]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1 and b - a <= precision:
            out.append((a, b))
            continue
        if n == 1 and p(b) == 0:
            out.append((b, b))
            continue
        m = (a + b) / 2
        if n == 1 and p(m) == 0:
            out.append((m, m))
            continue
        vm = _sign_changes(chain, m)
        stack.append((m, b, vm, vb))
        stack.append((a, m, va, vm))
    out.sort()
    return out


def isolate_real_roots(p: Poly, precision: float | Fraction = Fraction(1, 10**12)) -> list[RootBracket]:
    """All real roots of ``p`` with exact multiplicities, sorted ascending.

    Multiplicities come from the gcd tower ``g_i = gcd(g_{i-1}, g_{i-1}')``;
    roots of multiplicity exactly ``i`` are the roots of the square-free
    factor ``w_i`` with ``p = c * prod w_i**i``.
    """
    if p.is_zero():
        raise InvalidInput("the zero polynomial has no isolated roots")
    precision = Fraction(precision)
    if precision <= 0:
        raise InvalidInput("precision must be positive")
    tower = [p.monic()]
    while tower[-1].degree:
        tower.append(poly_gcd(tower[-1], tower[-1].derivative()))
    # h_i = g_{i-1}/g_i carries roots of multiplicity >= i
    h = [tower[i - 1].exact_div(tower[i]) for i in range(1, len(tower))]
    h.append(Poly.const(1))
    out: list[RootBracket] = []
    for i in range(1, len(h)):
        w = h[i - 1].exact_div(h[i])
        for a, b in _isolate_squarefree(w, precision):
            if a != b:
                guess = ((a + b) / 2).limit_denominator(10**6)
                if a <= guess <= b and w(guess) == 0:
                    a = b = guess
            out.append(RootBracket(a, b, i))
    out.sort(key=lambda r: r.lo)
    return out


def poly_real_roots(p: Poly, precision: float | Fraction = 1e-12) -> list[tuple[float, int]]:
    """``[(root, multiplicity), ...]`` for the real roots of ``p``."""
    return [(r.value, r.multiplicity) for r in isolate_real_roots(p, precision)]
