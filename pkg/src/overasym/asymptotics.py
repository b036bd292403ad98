"""Effective asymptotic expansions of p̄(n+k) and of its shifted differences.

Coefficients are built exactly as :class:`~overasym.pilaurent.PiLaurent`
values.  Thresholds and error constants are evaluated with mpmath at an
explicit precision; integer thresholds that involve a ceiling use a
dual-precision enclosure so that round-off cannot move them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple

import mpmath
from mpmath import mpf

from .errors import DomainError, PreconditionError
from .numerics import BigFloat, certified_ceil, check_bits, resolve_bits
from .pilaurent import PiLaurent

# --------------------------------------------------------------- thresholds


def _threshold_N_raw(m: int) -> mpf:
    if m == 1:
        return mpf(9)
    return 10 * m * mpmath.log(m) - m * mpmath.log(mpmath.log(m))


def threshold_N(m: int, bits: int = 128) -> mpf:
    """``N(m)``: 9 for m = 1, else ``10 m ln m - m ln ln m``."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    with mpmath.workprec(check_bits(bits)):
        return +_threshold_N_raw(m)


@lru_cache(maxsize=None)
def threshold_N0(m: int) -> int:
    """``N_0(m) = ceil((N(m)/π)^2)``."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    return certified_ceil(lambda: (_threshold_N_raw(m) / mpmath.pi) ** 2)


def threshold_N1(m: int, k: int) -> int:
    """``N_0(m) - k`` for one fixed shift ``k``.

    Informational only: none of the thresholds below depend on it.
    """
    return threshold_N0(m) - k


@lru_cache(maxsize=None)
def _ceil_k2_pi2_over_4(k: int) -> int:
    return certified_ceil(lambda: k * k * mpmath.pi ** 2 / 4)


@lru_cache(maxsize=None)
def n_min(N: int, k: int) -> int:
    """Smallest ``n`` for which the expansion of ``p̄(n+k)`` to order N is asserted."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if k == 0:
        raise DomainError("shift k must be nonzero")
    base = threshold_N0(N + 1)
    if k > 0:
        return max(base, 4 * k, k * k, _ceil_k2_pi2_over_4(k))
    return max(base, 4 * -k)


def n_min_diff(N: int, r: int, j: int) -> int:
    _check_diff_args(N, r, j)
    return max(n_min(N, -(m + 1) * j) for m in range(r + 1))


# ------------------------------------------------------------- coefficients


@lru_cache(maxsize=None)
def coeff_A(k: int, t: int) -> PiLaurent:
    """Coefficient of ``n^{-t/2}`` in the expansion of ``p̄(n+k)``."""
    if k == 0:
        raise DomainError("shift k must be nonzero")
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    scale = Fraction(k, 2) ** t
    terms = {}
    for l in range((t + 1) // 2 + 1):
        c = Fraction((-1) ** l * (t + 1 - l) * comb(t + 1, l), factorial(t + 1 - 2 * l))
        terms[t - 2 * l] = scale * c / Fraction(k) ** l
    return PiLaurent(terms)


@lru_cache(maxsize=None)
def coeff_A_diff(j: int, t: int, r: int) -> PiLaurent:
    """Coefficient of ``n^{-t/2}`` in the expansion of ``Δ_j^r(p̄)(n-j)``.

    For ``r = 0`` this is just ``coeff_A(-j, t)``.
    """
    if j < 1:
        raise DomainError(f"j must be >= 1, got {j}")
    if t < 0 or r < 0:
        raise DomainError("t and r must be non-negative")
    scale = Fraction(-1, 2) ** t
    terms = {}
    for l in range((t + 1) // 2 + 1):
        inner = sum((-1) ** m * comb(r, m) * (m + 1) ** (t - l) for m in range(r + 1))
        if inner == 0:
            continue
        c = Fraction(comb(t + 1, l) * j ** (t - l) * (t + 1 - l), factorial(t + 1 - 2 * l))
        terms[t - 2 * l] = scale * c * inner
    return PiLaurent(terms)


def stirling2(n: int, m: int) -> int:
    """Stirling number of the second kind from ``m! S(n,m) = sum_k C(m,k) k^n (-1)^(m-k)``."""
    if n < 0 or m < 0:
        raise DomainError("stirling2 needs non-negative arguments")
    if m > n:
        return 0
    total = sum(comb(m, k) * k ** n * (-1) ** (m - k) for k in range(m + 1))
    q, rem = divmod(total, factorial(m))
    assert rem == 0, (n, m, total)
    return q


# -------------------------------------------------------------- error budget


@dataclass(frozen=True)
class ErrorBudget:
    N: int
    k: int | None
    r: int | None
    j: int | None
    N_of_m: BigFloat
    N0: int
    N1: int | None
    n_min: int
    E1_tilde: BigFloat
    E2_tilde: BigFloat
    E1_bar: BigFloat
    E2_hat: BigFloat
    E: BigFloat
    bits: int


def _components(N: int, k: int) -> tuple[mpf, mpf, mpf]:
    a = abs(k)
    pi = mpmath.pi
    lead = 2 * mpf(a) ** (mpf(N) / 2) / pi ** mpf(1.5)
    e1 = lead * mpmath.sinh(pi * mpmath.sqrt(a)) * (1 + mpmath.sqrt(2 * (N + 1)))
    e2 = lead * mpmath.cosh(pi * mpmath.sqrt(a)) * mpmath.sqrt(2 * (N + 2))
    if k > 0:
        e_hat = (1 + pi) / pi ** (N + 1)
    else:
        e_hat = mpf(2) ** (mpf(N + 3) / 2) / pi ** (N + 1)
    return e1, e2, e_hat


@lru_cache(maxsize=1024)
def error_budget(N: int, k: int, precision_bits: int = 128) -> ErrorBudget:
    """All constants of the order-N expansion of ``p̄(n+k)``."""
    bits = check_bits(precision_bits)
    threshold = n_min(N, k)
    with mpmath.workprec(bits):
        e1, e2, e_hat = _components(N, k)
        e1_bar = e1 + e2
        total = e1_bar + e_hat
        nm = +_threshold_N_raw(N + 1)
    return ErrorBudget(
        N=N, k=k, r=None, j=None,
        N_of_m=BigFloat(nm, bits), N0=threshold_N0(N + 1), N1=threshold_N1(N + 1, k),
        n_min=threshold,
        E1_tilde=BigFloat(e1, bits), E2_tilde=BigFloat(e2, bits),
        E1_bar=BigFloat(e1_bar, bits), E2_hat=BigFloat(e_hat, bits),
        E=BigFloat(total, bits), bits=bits)


def _check_diff_args(N: int, r: int, j: int) -> None:
    if r < 1:
        raise DomainError(f"order r must be >= 1, got {r}")
    if j < 1:
        raise DomainError(f"shift j must be >= 1, got {j}")
    if N < r:
        raise DomainError(f"expansion order N={N} must be >= r={r}")


@lru_cache(maxsize=1024)
def error_budget_diff(N: int, r: int, j: int, precision_bits: int = 128) -> ErrorBudget:
    """Constants for ``Δ_j^r``: binomially weighted sums over the shifts ``-(m+1) j``."""
    _check_diff_args(N, r, j)
    bits = check_bits(precision_bits)
    with mpmath.workprec(bits):
        e1 = e2 = e_hat = mpf(0)
        for m in range(r + 1):
            w = comb(r, m)
            c1, c2, ch = _components(N, -(m + 1) * j)
            e1 += w * c1
            e2 += w * c2
            e_hat += w * ch
        e1_bar = e1 + e2
        total = e1_bar + e_hat
        nm = +_threshold_N_raw(N + 1)
    return ErrorBudget(
        N=N, k=None, r=r, j=j,
        N_of_m=BigFloat(nm, bits), N0=threshold_N0(N + 1), N1=None,
        n_min=n_min_diff(N, r, j),
        E1_tilde=BigFloat(e1, bits), E2_tilde=BigFloat(e2, bits),
        E1_bar=BigFloat(e1_bar, bits), E2_hat=BigFloat(e_hat, bits),
        E=BigFloat(total, bits), bits=bits)


# ---------------------------------------------------------------- expansions


class Expansion(NamedTuple):
    main: BigFloat
    bound: BigFloat


def _evaluate(n: int, coeffs: list[PiLaurent], first_t: int, E: mpf, N: int, bits: int) -> Expansion:
    with mpmath.workprec(bits):
        nn = mpf(n)
        root = mpmath.sqrt(nn)
        prefactor = mpmath.exp(mpmath.pi * root) / (8 * nn)
        s = mpf(0)
        for t, c in enumerate(coeffs, start=first_t):
            s += c.evaluate(bits) / root ** t
        main = prefactor * s
        bound = prefactor * E / root ** (N + 1)
    return Expansion(BigFloat(main, bits), BigFloat(bound, bits))


def expansion_value(n: int, k: int, N: int, precision_bits: int | None = None) -> Expansion:
    """Main term and remainder bound of the order-N expansion of ``p̄(n+k)``."""
    threshold = n_min(N, k)
    if n < threshold:
        raise PreconditionError(f"n={n} is below n(N={N}, k={k}) = {threshold}", threshold)
    bits = resolve_bits(precision_bits, n)
    budget = error_budget(N, k, bits)
    coeffs = [coeff_A(k, t) for t in range(N + 1)]
    return _evaluate(n, coeffs, 0, budget.E.value, N, bits)


def expansion_diff_value(n: int, j: int, r: int, N: int,
                         precision_bits: int | None = None) -> Expansion:
    """Main term and remainder bound of the order-N expansion of ``Δ_j^r(p̄)(n-j)``."""
    _check_diff_args(N, r, j)
    threshold = n_min_diff(N, r, j)
    if n < threshold:
        raise PreconditionError(f"n={n} is below n(N={N}, r={r}, j={j}) = {threshold}", threshold)
    bits = resolve_bits(precision_bits, n)
    budget = error_budget_diff(N, r, j, bits)
    coeffs = [coeff_A_diff(j, t, r) for t in range(r, N + 1)]
    return _evaluate(n, coeffs, r, budget.E.value, N, bits)


# ---------------------------------------------------------------- zeta(3/2)


@lru_cache(maxsize=None)
def zeta_three_halves(terms: int = 20000, bits: int = 128) -> tuple[mpf, mpf]:
    """Enclosure ``(lo, hi)`` of ζ(3/2) from a partial sum and integral tail bounds.

    The tail past ``M`` lies between ``2/sqrt(M+1)`` and ``2/sqrt(M)``.
    """
    M = terms
    with mpmath.workprec(bits + 32):
        partial = mpmath.fsum(mpf(n) ** mpf(-1.5) for n in range(1, M + 1))
        # covers summation round-off and the final rounding to `bits`
        pad = partial * mpf(2) ** (-bits + 2)
        lo = partial + 2 / mpmath.sqrt(M + 1) - pad
        hi = partial + 2 / mpmath.sqrt(M) + pad
    with mpmath.workprec(bits):
        return +lo, +hi
