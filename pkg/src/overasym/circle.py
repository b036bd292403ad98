"""Zuckerman's series for p̄(n), truncated with Engel's error bound.

Every root of unity in the series is carried as an exact rational multiple
of ``πi``; the phases of a whole term are combined and reduced mod 2 before
anything is evaluated in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mpf

from .errors import CertificationError, DomainError
from .numerics import GUARD_BITS, BigFloat, resolve_bits


@dataclass(frozen=True)
class RootOfUnity:
    """``exp(πi · numerator/denominator)`` with the fraction in lowest terms."""

    exponent_numerator: int
    exponent_denominator: int = 1

    def __post_init__(self):
        if self.exponent_denominator < 1:
            raise ValueError("denominator must be positive")
        if math.gcd(self.exponent_numerator, self.exponent_denominator) != 1:
            raise ValueError("exponent not in lowest terms; use RootOfUnity.of()")

    @classmethod
    def of(cls, exponent: Fraction | int) -> RootOfUnity:
        exponent = Fraction(exponent)
        return cls(exponent.numerator, exponent.denominator)

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.exponent_numerator, self.exponent_denominator)

    def modulus(self) -> int:
        return 1

    def reduced(self) -> RootOfUnity:
        """Same point on the circle with the exponent moved into ``[0, 2)``."""
        return RootOfUnity.of(self.exponent % 2)

    def __mul__(self, other: RootOfUnity) -> RootOfUnity:
        return RootOfUnity.of(self.exponent + other.exponent)

    def __truediv__(self, other: RootOfUnity) -> RootOfUnity:
        return RootOfUnity.of(self.exponent - other.exponent)

    def __pow__(self, e: int) -> RootOfUnity:
        return RootOfUnity.of(self.exponent * e)

    def same_point(self, other: RootOfUnity) -> bool:
        return (self.exponent - other.exponent) % 2 == 0

    def to_complex(self, bits: int = 128) -> mpmath.mpc:
        with mpmath.workprec(bits):
            x = self.exponent % 2
            return mpmath.mpc(mpmath.cospi(mpf(x.numerator) / x.denominator),
                              mpmath.sinpi(mpf(x.numerator) / x.denominator))


@lru_cache(maxsize=None)
def _omega_exponent(h: int, k: int) -> Fraction:
    s = Fraction(0)
    for r in range(1, k):
        frac = Fraction(h * r % k, k)  # hr/k - floor(hr/k)
        s += Fraction(r, k) * (frac - Fraction(1, 2))
    return s


def omega(h: int, k: int) -> RootOfUnity:
    """The multiplier ``ω(h, k)``, evaluated exactly from its defining sum."""
    if k < 1:
        raise DomainError(f"omega needs k >= 1, got k={k}")
    if h < 0:
        raise DomainError(f"omega needs h >= 0, got h={h}")
    return RootOfUnity.of(_omega_exponent(h, k))


@lru_cache(maxsize=None)
def term_phases(k: int, n_mod_k: int) -> tuple[Fraction, ...]:
    """Reduced phases (in units of π) of ``ω(h,k)^2 / ω(2h,k) · e^{-2πinh/k}`` over units h."""
    phases = []
    for h in range(k):
        if math.gcd(h, k) != 1:
            continue
        theta = 2 * _omega_exponent(h, k) - _omega_exponent(2 * h % k, k) \
            - Fraction(2 * n_mod_k * h, k)
        phases.append(theta % 2)
    return tuple(phases)


@dataclass(frozen=True)
class TruncatedSeries:
    n: int
    N: int
    value: BigFloat
    engel_bound: BigFloat
    precision_bits: int
    imag_residue: mpf

    def certifies(self) -> bool:
        return self.engel_bound.value < mpf(1) / 2


def engel_bound(n: int, N: int) -> mpf:
    """``N^{5/2} / (π n^{3/2}) · sinh(π √n / N)`` at the active precision."""
    n = mpf(n)
    return mpf(N) ** mpf(2.5) / (mpmath.pi * n ** mpf(1.5)) * mpmath.sinh(mpmath.pi * mpmath.sqrt(n) / N)


def _derivative_kernel(n: mpf, k: int) -> mpf:
    # d/dn [sinh(π√n/k)/√n]
    x = mpmath.pi * mpmath.sqrt(n) / k
    return mpmath.pi * mpmath.cosh(x) / (2 * k * n) - mpmath.sinh(x) / (2 * n * mpmath.sqrt(n))


def _series(n: int, N: int) -> tuple[mpf, mpf]:
    nn = mpf(n)
    re = mpf(0)
    im = mpf(0)
    for k in range(1, N + 1, 2):
        c = mpf(0)
        s = mpf(0)
        for theta in term_phases(k, n % k):
            x = mpf(theta.numerator) / theta.denominator
            c += mpmath.cospi(x)
            s += mpmath.sinpi(x)
        w = mpmath.sqrt(k) * _derivative_kernel(nn, k)
        re += w * c
        im += w * s
    scale = 1 / (2 * mpmath.pi)
    return re * scale, im * scale


def zuckerman_partial(n: int, N: int, precision_bits: int | None = None) -> TruncatedSeries:
    """Sum the odd ``k <= N`` terms of Zuckerman's series for ``p̄(n)``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if N < 1:
        raise DomainError(f"truncation order N must be >= 1, got {N}")
    bits = resolve_bits(precision_bits, n)
    with mpmath.workprec(bits):
        value, imag = _series(n, N)
        bound = engel_bound(n, N)
    return TruncatedSeries(n, N, BigFloat(value, bits), BigFloat(bound, bits), bits, imag)


@dataclass(frozen=True)
class Certification:
    n: int
    value: int
    N: int
    engel_bound: BigFloat
    slack: mpf
    precision_bits: int


def scan_cap(n: int) -> int:
    return math.isqrt(n - 1) + 1 + 16 if n > 0 else 17


def certify(n: int, precision_bits: int | None = None) -> Certification:
    """Round the truncated series to an integer once the error is provably below 1/2.

    Scans odd N upward to ``ceil(sqrt(n)) + 16``.  Round-off is estimated by
    re-evaluating at ``precision_bits + 32`` and is added to Engel's bound.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    bits = resolve_bits(precision_bits, n)
    half = mpf(1) / 2
    best = None
    for N in range(1, scan_cap(n) + 1, 2):
        with mpmath.workprec(bits):
            bound = engel_bound(n, N)
        if best is None or bound < best:
            best = bound
        if not bound < half:
            continue
        lo = zuckerman_partial(n, N, bits)
        hi = zuckerman_partial(n, N, bits + GUARD_BITS)
        with mpmath.workprec(bits + GUARD_BITS):
            slack = abs(hi.value.value - lo.value.value)
            total = bound + slack
            if total < half:
                best_value = int(mpmath.nint(hi.value.value))
                return Certification(n, best_value, N, BigFloat(bound, bits), slack, bits)
        if total < best:
            best = total
    raise CertificationError(
        f"no odd N <= {scan_cap(n)} brings the error bound for n={n} below 1/2 "
        f"(best {mpmath.nstr(best, 6)})", best)


def certified_value(n: int, precision_bits: int | None = None) -> int:
    return certify(n, precision_bits).value
