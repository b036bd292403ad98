"""Exact Laurent polynomials in π with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

import mpmath
from mpmath import mpf

Scalar = Union[int, Fraction]


class PiLaurent:
    """A finite sum ``sum_e c_e π^e`` with ``c_e`` in Q and ``e`` in Z.

    Instances are immutable and hashable; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | Iterable[tuple[int, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            e = int(e)
            acc[e] = acc.get(e, Fraction(0)) + Fraction(c)
        self._terms = {e: c for e, c in sorted(acc.items(), reverse=True) if c != 0}
        self._hash = None

    @classmethod
    def monomial(cls, coeff: Scalar, exponent: int) -> PiLaurent:
        return cls({exponent: coeff})

    @property
    def terms(self) -> dict[int, Fraction]:
        """Exponent to coefficient, highest exponent first."""
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def exponents(self) -> list[int]:
        return list(self._terms)

    def coeff(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other) -> PiLaurent:
        if isinstance(other, PiLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return PiLaurent({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return PiLaurent(list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return PiLaurent({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PiLaurent({e: c * other for e, c in self._terms.items()})
        if not isinstance(other, PiLaurent):
            return NotImplemented
        return PiLaurent((e1 + e2, c1 * c2)
                         for e1, c1 in self._terms.items()
                         for e2, c2 in other._terms.items())

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # -- evaluation and text ------------------------------------------------

    def evaluate(self, bits: int = 128) -> mpf:
        """Numeric value at ``bits`` of precision.  This is the only lossy step."""
        return _evaluate(self, bits)

    def __repr__(self) -> str:
        return f"PiLaurent({self._terms!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self._terms.items()):
            if i == 0:
                parts.append(f"{c} * pi^{e}")
            elif c < 0:
                parts.append(f"- {-c} * pi^{e}")
            else:
                parts.append(f"+ {c} * pi^{e}")
        return " ".join(parts)

    def to_json(self) -> dict[str, str]:
        return {str(e): str(c) for e, c in self._terms.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> PiLaurent:
        return cls({int(e): Fraction(c) for e, c in data.items()})


@lru_cache(maxsize=4096)
def _evaluate(poly: PiLaurent, bits: int) -> mpf:
    with mpmath.workprec(bits + 16):
        pi = +mpmath.pi
        total = mpf(0)
        for e, c in poly._terms.items():
            total += mpf(c.numerator) / c.denominator * pi ** e
    with mpmath.workprec(bits):
        return +total
