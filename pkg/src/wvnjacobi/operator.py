"""Periodic Jacobi matrices: validation, periodic indexing and JSON ingestion."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from pathlib import Path
from typing import NamedTuple, Sequence

from .errors import InvalidInput, NonPositiveOffDiagonal
from .exact import to_rational

__all__ = ["PeriodicJacobi", "SiteIndex", "make_operator", "site", "load_operator", "operator_to_json"]


class SiteIndex(NamedTuple):
    """``n = T*(k-1) + s`` with ``0 <= s < T``."""

    n: int
    k: int
    s: int


@dataclass(frozen=True)
class PeriodicJacobi:
    """Semi-infinite Jacobi matrix with period ``T``.

    ``a[i-1]`` and ``b[i-1]`` hold the 1-based entries ``a_i``,
    ``b_i``.  ``exact_a``/``exact_b`` are the rational mirrors, present only
    when every entry was supplied exactly.
    """

    a: tuple[float, ...]
    b: tuple[float, ...]
    exact_a: tuple[Fraction, ...] | None = None
    exact_b: tuple[Fraction, ...] | None = None

    @property
    def T(self) -> int:
        return len(self.a)

    @property
    def has_exact(self) -> bool:
        return self.exact_a is not None and self.exact_b is not None

    @property
    def zero_diagonal(self) -> bool:
        return all(x == 0 for x in self.b)

    def a_at(self, n: int) -> float:
        """``a_n`` for any integer ``n`` (so ``a_0 = a_T``)."""
        return self.a[(n - 1) % self.T]

    def b_at(self, n: int) -> float:
        return self.b[(n - 1) % self.T]

    def exact_a_at(self, n: int) -> Fraction:
        return self.exact_a[(n - 1) % self.T]

    def exact_b_at(self, n: int) -> Fraction:
        return self.exact_b[(n - 1) % self.T]

    def spectral_bounds(self) -> tuple[float, float]:
        """Interval containing the spectrum (Gershgorin-type inclusion)."""
        T = self.T
        s = max(self.a[i] + self.a[(i + 1) % T] for i in range(T))
        return -s + min(self.b), s + max(self.b)

    def perturbed(self, epsilon=0, eta=0) -> "PeriodicJacobi":
        """Copy with ``b_1 -> b_1 + epsilon`` and ``a_1 -> a_1 + eta``."""
        a = list(self.exact_a) if self.has_exact else list(self.a)
        b = list(self.exact_b) if self.has_exact else list(self.b)
        a[0] = a[0] + eta
        b[0] = b[0] + epsilon
        return make_operator(a, b)


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, str)) and not isinstance(x, bool)


def make_operator(a: Sequence, b: Sequence | None = None) -> PeriodicJacobi:
    """Validate entries and build a :class:`PeriodicJacobi`.

    Entries may be floats, ints, :class:`~fractions.Fraction` or ``"p/q"``
    strings.  Exact mirrors are kept only when all entries are exact.
    """
    a = list(a)
    b = [0] * len(a) if b is None else list(b)
    if len(a) == 0:
        raise InvalidInput("period must be at least 1")
    if len(a) != len(b):
        raise InvalidInput(f"length mismatch: {len(a)} off-diagonal vs {len(b)} diagonal entries")
    exact = all(_is_exact(x) for x in a + b)
    if exact:
        ea = tuple(to_rational(x) for x in a)
        eb = tuple(to_rational(x) for x in b)
        fa = tuple(float(x) for x in ea)
        fb = tuple(float(x) for x in eb)
    else:
        ea = eb = None
        try:
            fa = tuple(float(to_rational(x)) if isinstance(x, str) else float(x) for x in a)
            fb = tuple(float(to_rational(x)) if isinstance(x, str) else float(x) for x in b)
        except (TypeError, ValueError) as exc:
            raise InvalidInput(f"non-numeric operator entry: {exc}") from exc
    for i, x in enumerate(ea if exact else fa, start=1):
        if not x > 0:
            raise NonPositiveOffDiagonal(f"a_{i} = {x} must be positive")
    for x in fa + fb:
        if x != x or x in (float("inf"), float("-inf")):
            raise InvalidInput("operator entries must be finite")
    return PeriodicJacobi(fa, fb, ea, eb)


def site(J: PeriodicJacobi, n: int) -> tuple[float, float, SiteIndex]:
    """Periodic lookup ``(a_n, b_n, (n, k, s))``; ``n = 0`` gives ``a_T``."""
    T = J.T
    k, s = divmod(n, T)
    return J.a_at(n), J.b_at(n), SiteIndex(n, k + 1, s)


def load_operator(path: str | Path) -> PeriodicJacobi:
    """Read ``{"a": [...], "b": [...]}``; ``"p/q"`` strings stay exact.

    JSON integers count as exact, JSON floats do not.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "a" not in data:
        raise InvalidInput(f'{path}: expected an object with key "a"')
    a = data["a"]
    b = data.get("b")
    if not isinstance(a, list) or (b is not None and not isinstance(b, list)):
        raise InvalidInput(f"{path}: 'a' and 'b' must be arrays")
    for x in a + (b or []):
        if not isinstance(x, (str, Real)) or isinstance(x, bool):
            raise InvalidInput(f"{path}: bad entry {x!r}")
    return make_operator(a, b)


def operator_to_json(J: PeriodicJacobi) -> dict:
    if J.has_exact:
        fmt = lambda x: str(x) if x.denominator != 1 else int(x)  # noqa: E731
        return {"a": [fmt(x) for x in J.exact_a], "b": [fmt(x) for x in J.exact_b]}
    return {"a": list(J.a), "b": list(J.b)}
