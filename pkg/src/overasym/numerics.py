"""Precision policy and the :class:`BigFloat` value carrier."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import mpmath
from mpmath import mpf

from .errors import ConfigurationError

#: Lowest precision any evaluation will accept.
MIN_BITS = 64
#: Extra bits used for the second evaluation in dual-precision checks.
GUARD_BITS = 32


@dataclass(frozen=True)
class BigFloat:
    """A binary floating-point value together with the precision it was computed at."""

    value: mpf
    bits: int

    @property
    def digits(self) -> int:
        return decimal_digits(self.bits)

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return f"{format_mpf(self.value, self.bits)}@{self.bits}b"


def decimal_digits(bits: int) -> int:
    """Significant decimal digits that round-trip a ``bits``-bit mantissa."""
    return math.ceil(bits * math.log10(2)) + 1


def format_mpf(x: mpf, bits: int) -> str:
    """Decimal text of ``x`` with enough digits to parse back exactly at ``bits``."""
    if not isinstance(x, mpf):
        x = mpf(x)
    return mpmath.libmp.to_str(x._mpf_, decimal_digits(bits))


def parse_mpf(text: str, bits: int) -> mpf:
    with mpmath.workprec(bits):
        return mpf(text)


def default_bits(n: int) -> int:
    """Precision large enough to hold ``exp(pi*sqrt(n))`` with 64 guard bits."""
    if n < 0:
        n = 0
    need = math.ceil(math.pi * math.sqrt(n) / math.log(2)) + 64
    return max(128, need)


def check_bits(bits: int) -> int:
    if bits < MIN_BITS:
        raise ConfigurationError(f"precision {bits} bits is below the {MIN_BITS}-bit floor")
    return bits


def resolve_bits(bits: int | None, n: int) -> int:
    """Apply the default policy when ``bits`` is None, otherwise validate it."""
    if bits is None:
        return default_bits(n)
    return check_bits(int(bits))


def certified_ceil(fn: Callable[[], mpf], bits: int = 128, max_bits: int = 4096) -> int:
    """Ceiling of the real number computed by ``fn`` (evaluated under the active precision).

    Two evaluations at ``p`` and ``p + 32`` bits bound the round-off; the
    precision is doubled until the enclosure no longer touches an integer.
    """
    p = bits
    while p <= max_bits:
        with mpmath.workprec(p):
            a = fn()
        with mpmath.workprec(p + GUARD_BITS):
            b = fn()
            slack = abs(a - b) + abs(b) * mpf(2) ** (-p)
            lo, hi = b - slack, b + slack
            flo, fhi = int(mpmath.floor(lo)), int(mpmath.floor(hi))
            if flo == fhi and lo > flo:
                return flo + 1
        p *= 2
    raise ArithmeticError("could not separate value from an integer boundary")
