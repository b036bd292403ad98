"""Exact overpartition numbers and shifted finite differences.

Two independent constructions are provided.  :func:`table_theta` uses the
sparse recurrence that follows from multiplying the generating function by
the theta series ``sum_s (-1)^s q^(s^2)``; :func:`table_oracle` convolves
distinct-part partitions (the overlined parts) with ordinary partitions
(the plain parts).  They share no code so that each checks the other.
"""

from __future__ import annotations

import csv
import enum
import io
import os
import struct
import threading
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import Sequence

from .errors import DomainError, OverasymError, RangeError

# p̄(0..10), used to sanity-check cache reads.
KNOWN_VALUES = (1, 2, 4, 8, 14, 24, 40, 64, 100, 154, 232)

CACHE_MAGIC = b"OPT1"
CACHE_ENV = "OVERASYM_CACHE"


class Method(str, enum.Enum):
    THETA = "theta_recurrence"
    ORACLE = "convolution_oracle"


@dataclass(frozen=True)
class OverpartitionTable:
    n_max: int
    values: tuple[int, ...]
    method: Method

    def __post_init__(self):
        if len(self.values) != self.n_max + 1:
            raise ValueError("values must cover 0..n_max")

    def __getitem__(self, n: int) -> int:
        if n < 0 or n > self.n_max:
            raise RangeError(f"index {n} outside table range 0..{self.n_max}")
        return self.values[n]

    def __len__(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class DifferenceSpec:
    """Order ``r`` and shift ``j`` of the operator ``Δ_j^r``."""

    j: int = 1
    r: int = 1

    def __post_init__(self):
        if self.j < 1:
            raise DomainError(f"shift j must be >= 1, got {self.j}")
        if self.r < 0:
            raise DomainError(f"order r must be >= 0, got {self.r}")


def _check_n_max(n_max: int) -> None:
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")


def _theta_extend(values: list[int], n_max: int) -> None:
    # p̄(n) = 2 * sum_{s>=1} (-1)^(s+1) p̄(n - s^2)
    for n in range(len(values), n_max + 1):
        acc = 0
        s = 1
        sq = 1
        while sq <= n:
            if s & 1:
                acc += values[n - sq]
            else:
                acc -= values[n - sq]
            s += 1
            sq = s * s
        values.append(acc << 1)


def table_theta(n_max: int) -> OverpartitionTable:
    """p̄(0..n_max) by the sparse theta recurrence, O(n_max^1.5) additions."""
    _check_n_max(n_max)
    values = [1]
    _theta_extend(values, n_max)
    return OverpartitionTable(n_max, tuple(values), Method.THETA)


def _distinct_parts(n_max: int) -> list[int]:
    q = [0] * (n_max + 1)
    q[0] = 1
    for part in range(1, n_max + 1):
        for total in range(n_max, part - 1, -1):
            q[total] += q[total - part]
    return q


def _ordinary_parts(n_max: int) -> list[int]:
    p = [0] * (n_max + 1)
    p[0] = 1
    for part in range(1, n_max + 1):
        for total in range(part, n_max + 1):
            p[total] += p[total - part]
    return p


def table_oracle(n_max: int) -> OverpartitionTable:
    """p̄(0..n_max) as the convolution of distinct-part and ordinary partition counts.

    Quadratic in ``n_max``; intended as a cross-check up to a few thousand.
    """
    _check_n_max(n_max)
    q = _distinct_parts(n_max)
    p = _ordinary_parts(n_max)
    values = tuple(sum(q[m] * p[n - m] for m in range(n + 1)) for n in range(n_max + 1))
    return OverpartitionTable(n_max, values, Method.ORACLE)


def shifted_difference(table: OverpartitionTable, spec: DifferenceSpec, n: int) -> int:
    """``Δ_j^r(p̄)(n) = sum_m (-1)^m C(r, m) p̄(n - m j)``.

    Negative arguments of p̄ are rejected rather than read as zero.
    """
    lowest = n - spec.r * spec.j
    if lowest < 0:
        raise RangeError(f"Δ_{spec.j}^{spec.r} at n={n} needs p̄({lowest}), which is undefined")
    if n > table.n_max:
        raise RangeError(f"n={n} exceeds table n_max={table.n_max}")
    total = 0
    for m in range(spec.r + 1):
        term = comb(spec.r, m) * table.values[n - m * spec.j]
        total += -term if m & 1 else term
    return total


def difference_sequence(values: Sequence[int], spec: DifferenceSpec) -> list[int]:
    """All of ``Δ_j^r(a)(n)`` for ``r j <= n < len(values)``, by repeated differencing.

    Entry ``i`` of the result holds the value at ``n = r j + i``.
    """
    seq = list(values)
    for _ in range(spec.r):
        seq = [seq[i] - seq[i - spec.j] for i in range(spec.j, len(seq))]
    return seq


# ---------------------------------------------------------------- shared table

_lock = threading.Lock()
_shared: list[int] = [1]


def overpartitions(n_max: int) -> OverpartitionTable:
    """Process-wide theta table covering at least ``0..n_max``, grown on demand."""
    _check_n_max(n_max)
    with _lock:
        if len(_shared) <= n_max:
            _theta_extend(_shared, n_max)
        values = tuple(_shared[: n_max + 1])
    return OverpartitionTable(n_max, values, Method.THETA)


# ---------------------------------------------------------------- persistence

class CacheError(OverasymError):
    """A cache file is malformed or fails its integrity check."""


def write_table(table: OverpartitionTable, stream) -> None:
    stream.write(CACHE_MAGIC)
    stream.write(struct.pack("<Q", table.n_max))
    for v in table.values:
        raw = v.to_bytes((v.bit_length() + 7) // 8, "little")
        stream.write(struct.pack("<I", len(raw)))
        stream.write(raw)


def read_table(stream, method: Method = Method.THETA) -> OverpartitionTable:
    if stream.read(4) != CACHE_MAGIC:
        raise CacheError("bad magic")
    head = stream.read(8)
    if len(head) != 8:
        raise CacheError("truncated header")
    (n_max,) = struct.unpack("<Q", head)
    values = []
    for _ in range(n_max + 1):
        size = stream.read(4)
        if len(size) != 4:
            raise CacheError("truncated length field")
        (length,) = struct.unpack("<I", size)
        raw = stream.read(length)
        if len(raw) != length:
            raise CacheError("truncated value")
        values.append(int.from_bytes(raw, "little"))
    known = KNOWN_VALUES[: n_max + 1]
    if tuple(values[: len(known)]) != known:
        raise CacheError("cached values fail the p̄(0..10) check")
    return OverpartitionTable(n_max, tuple(values), Method(method))


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".overasym"


def cache_path(cache_dir: Path, n_max: int, method: Method) -> Path:
    return Path(cache_dir) / f"{Method(method).value}-{n_max}.opt"


def cached_table(n_max: int, method: Method = Method.THETA,
                 cache_dir: Path | None = None) -> OverpartitionTable:
    """Load a table from the cache directory, computing and storing it on a miss.

    A corrupt cache file is recomputed and overwritten.
    """
    method = Method(method)
    path = cache_path(cache_dir or default_cache_dir(), n_max, method)
    if path.exists():
        try:
            with open(path, "rb") as fh:
                return read_table(fh, method)
        except CacheError:
            pass
    table = table_theta(n_max) if method is Method.THETA else table_oracle(n_max)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        write_table(table, fh)
    os.replace(tmp, path)
    return table


def table_csv(table: OverpartitionTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "overpartition"])
    for n, v in enumerate(table.values):
        writer.writerow([n, v])
    return buf.getvalue()
