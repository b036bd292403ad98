"""Brute-force oracles shared by the tests.  Deliberately naive."""

from __future__ import annotations

from fractions import Fraction
from math import floor


def partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 0, -1):
        for rest in partitions(n - part, part):
            yield (part,) + rest


def count_overpartitions(n):
    """Each distinct part of each partition may be overlined or not."""
    return sum(2 ** len(set(p)) for p in partitions(n))


def list_overpartitions(n):
    """All overpartitions of n as tuples of (part, overlined) pairs."""
    out = []
    for p in partitions(n):
        distinct = sorted(set(p), reverse=True)
        for mask in range(2 ** len(distinct)):
            marked = {d for i, d in enumerate(distinct) if mask >> i & 1}
            seq, seen = [], set()
            for part in p:
                over = part in marked and part not in seen
                seen.add(part)
                seq.append((part, over))
            out.append(tuple(seq))
    return out


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]
        yield [[first]] + smaller


def omega_exponent_direct(h, k):
    """The defining sum with an explicit floor, as a Fraction."""
    s = Fraction(0)
    for r in range(1, k):
        x = Fraction(h * r, k)
        s += Fraction(r, k) * (x - floor(x) - Fraction(1, 2))
    return s
