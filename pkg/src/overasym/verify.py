"""Machine checks of the effective statements against exact values.

Every check produces a :class:`VerificationReport`.  A bound that fails is a
finding recorded as ``passed=False``; only calls outside a statement's
hypotheses raise.

Exact integers are compared with floating-point quantities at the report
precision ``p``.  Each record is evaluated twice, at ``p`` and ``p + 32``
bits, and the discrepancy is charged against the inequality being checked,
so round-off can only make a check fail.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

import mpmath
from mpmath import mpf

from . import asymptotics as asy
from .errors import DomainError, PreconditionError
from .exact import DifferenceSpec, difference_sequence, overpartitions, shifted_difference
from .numerics import GUARD_BITS, format_mpf, parse_mpf, resolve_bits

DENSE_SPAN = 500
GEOMETRIC_FACTOR = 1.5


class Statement(str, enum.Enum):
    THM_1_1 = "thm_1_1"
    THM_1_2 = "thm_1_2"
    LEMMA_2_1 = "lemma_2_1"
    LEMMA_2_2 = "lemma_2_2"
    WXZ_UPPER = "wxz_upper"
    WXZ_POSITIVITY = "wxz_positivity"
    COROLLARY_RATIO = "corollary_ratio"


@dataclass(frozen=True)
class Record:
    n: int
    exact: int | None
    approx: mpf
    remainder: mpf
    bound: mpf
    passed: bool


@dataclass
class VerificationReport:
    """Outcome of one verification run.

    Field meaning per statement:

    * ``thm_1_1``, ``thm_1_2``: ``approx`` is the expansion main term,
      ``remainder = exact - approx``, ``bound`` the explicit remainder bound.
    * ``lemma_2_2``: relative quantities; ``remainder`` is
      ``p̄(n+k) 8(n+k) e^{-μ} - 1 + 1/μ`` and ``bound`` is ``μ^{-m}``.
    * ``lemma_2_1``: ``n`` indexes the sample points of
      :func:`lemma_2_1_points`, ``approx`` is ``10 x^m e^{-x/2}``,
      ``remainder = 1 - approx`` and ``bound = 1``.
    * ``wxz_upper``: ``approx = bound`` is the upper bound, ``remainder`` the
      margin ``bound - exact``; passing needs ``exact > 0`` too.
    * ``wxz_positivity``: only ``exact > 0`` is checked.
    * ``corollary_ratio``: ``approx`` is the leading term, ``remainder``
      is ``ρ - 1`` and ``bound`` the envelope.
    """

    statement_id: Statement
    parameters: dict[str, int]
    records: list[Record]
    precision_bits: int
    runtime_ms: int = 0
    summary: dict[str, int | None] = field(default_factory=dict)

    def __post_init__(self):
        self.statement_id = Statement(self.statement_id)
        self.records.sort(key=lambda rec: rec.n)

    @property
    def verdict(self) -> bool:
        return all(rec.passed for rec in self.records)

    def failures(self) -> list[Record]:
        return [rec for rec in self.records if not rec.passed]

    def passing_suffix_start(self) -> int | None:
        """Smallest sampled n from which every later record passes, or None."""
        start = None
        for rec in reversed(self.records):
            if not rec.passed:
                break
            start = rec.n
        return start

    # -- serialisation ------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "exact", "approx", "remainder", "bound", "pass"])
        for rec in self.records:
            writer.writerow(_record_fields(rec, self.precision_bits))
        return buf.getvalue()

    def to_json(self, include_runtime: bool = False) -> str:
        data = {
            "statement_id": self.statement_id.value,
            "parameters": self.parameters,
            "precision_bits": self.precision_bits,
            "verdict": self.verdict,
            "summary": self.summary,
            "records": [
                dict(zip(["n", "exact", "approx", "remainder", "bound", "pass"],
                         _record_fields(rec, self.precision_bits)))
                for rec in self.records
            ],
        }
        if include_runtime:
            data["runtime_ms"] = self.runtime_ms
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, text: str) -> VerificationReport:
        data = json.loads(text)
        bits = data["precision_bits"]
        records = [_parse_record(row, bits) for row in data["records"]]
        return cls(Statement(data["statement_id"]), data["parameters"], records, bits,
                   data.get("runtime_ms", 0), data.get("summary", {}))


def _record_fields(rec: Record, bits: int) -> list:
    return [rec.n, "" if rec.exact is None else str(rec.exact),
            format_mpf(rec.approx, bits), format_mpf(rec.remainder, bits),
            format_mpf(rec.bound, bits), "true" if rec.passed else "false"]


def _parse_record(row: dict, bits: int) -> Record:
    exact = row["exact"]
    return Record(int(row["n"]), None if exact in ("", None) else int(exact),
                  parse_mpf(row["approx"], bits), parse_mpf(row["remainder"], bits),
                  parse_mpf(row["bound"], bits), row["pass"] in ("true", True))


def records_from_csv(text: str, bits: int) -> list[Record]:
    return [_parse_record(row, bits) for row in csv.DictReader(io.StringIO(text))]


# ------------------------------------------------------------------ sampling


def sample_points(n_from: int, n_to: int, stride: int | None = None) -> list[int]:
    """Sample ``[n_from, n_to]``.

    With an explicit stride the grid is regular.  Otherwise every n in the
    first 500 past ``n_from`` is taken, then the step grows by a factor 1.5;
    ``n_to`` is always included.
    """
    if n_to < n_from:
        raise DomainError(f"empty range [{n_from}, {n_to}]")
    if stride is not None:
        if stride < 1:
            raise DomainError("stride must be >= 1")
        points = list(range(n_from, n_to + 1, stride))
    else:
        dense_end = min(n_to, n_from + DENSE_SPAN)
        points = list(range(n_from, dense_end + 1))
        n = dense_end
        while n < n_to:
            n = min(n_to, max(n + 1, math.ceil(n * GEOMETRIC_FACTOR)))
            points.append(n)
    if points[-1] != n_to:
        points.append(n_to)
    return points


def _dual(n: int, exact: int | None, fn: Callable[[int], tuple[mpf, mpf]], bits: int):
    """Evaluate ``fn`` at two precisions; return (approx, remainder, bound, slack)."""
    results = []
    for p in (bits, bits + GUARD_BITS):
        with mpmath.workprec(p):
            approx, bound = fn(p)
            remainder = (mpf(exact) - approx) if exact is not None else -approx
            results.append((approx, remainder, bound))
    (a0, r0, b0), (_, r1, b1) = results
    with mpmath.workprec(bits + GUARD_BITS):
        slack = abs(r0 - r1) + abs(b0 - b1)
    return a0, r0, b0, slack


def _within(remainder: mpf, bound: mpf, slack: mpf, bits: int) -> bool:
    with mpmath.workprec(bits + GUARD_BITS):
        return abs(remainder) + slack <= bound


def _report(statement, parameters, records, bits, started, **summary) -> VerificationReport:
    elapsed = int((time.perf_counter() - started) * 1000)
    return VerificationReport(statement, parameters, records, bits, elapsed, dict(summary))


# ------------------------------------------------- expansion of p̄(n+k)


def verify_theorem_1_1(N: int, k: int, n_from: int | None = None, n_to: int | None = None,
                       stride: int | None = None,
                       precision_bits: int | None = None) -> VerificationReport:
    """Check ``|p̄(n+k) - main| <= bound`` for the order-N expansion."""
    started = time.perf_counter()
    threshold = asy.n_min(N, k)
    n_from = threshold if n_from is None else n_from
    if n_from < threshold:
        raise PreconditionError(
            f"n_from={n_from} is below n(N={N}, k={k}) = {threshold}", threshold)
    n_to = n_from + DENSE_SPAN if n_to is None else n_to
    points = sample_points(n_from, n_to, stride)
    bits = resolve_bits(precision_bits, n_to + abs(k))
    table = overpartitions(n_to + max(k, 0))

    def fn_for(n):
        def fn(p):
            e = asy.expansion_value(n, k, N, p)
            return e.main.value, e.bound.value
        return fn

    records = []
    for n in points:
        exact = table[n + k]
        approx, rem, bound, slack = _dual(n, exact, fn_for(n), bits)
        records.append(Record(n, exact, approx, rem, bound, _within(rem, bound, slack, bits)))
    return _report(Statement.THM_1_1, {"N": N, "k": k, "n_from": n_from, "n_to": n_to},
                   records, bits, started, n_min=threshold)


# ------------------------------------------- expansion of shifted differences


def verify_theorem_1_2(N: int, r: int, j: int, n_from: int | None = None,
                       n_to: int | None = None, stride: int | None = None,
                       precision_bits: int | None = None) -> VerificationReport:
    """Check the order-N expansion of ``Δ_j^r(p̄)(n-j)`` against exact differences."""
    started = time.perf_counter()
    threshold = asy.n_min_diff(N, r, j)
    n_from = threshold if n_from is None else n_from
    if n_from < threshold:
        raise PreconditionError(
            f"n_from={n_from} is below n(N={N}, r={r}, j={j}) = {threshold}", threshold)
    n_to = n_from + DENSE_SPAN if n_to is None else n_to
    points = sample_points(n_from, n_to, stride)
    bits = resolve_bits(precision_bits, n_to)
    table = overpartitions(n_to)
    spec = DifferenceSpec(j=j, r=r)

    def fn_for(n):
        def fn(p):
            e = asy.expansion_diff_value(n, j, r, N, p)
            return e.main.value, e.bound.value
        return fn

    records = []
    for n in points:
        exact = shifted_difference(table, spec, n - j)
        approx, rem, bound, slack = _dual(n, exact, fn_for(n), bits)
        records.append(Record(n, exact, approx, rem, bound, _within(rem, bound, slack, bits)))
    return _report(Statement.THM_1_2, {"N": N, "r": r, "j": j, "n_from": n_from, "n_to": n_to},
                   records, bits, started, n_min=threshold)


# ---------------------------------------------------- threshold inequality


def lemma_2_1_points(m: int, count: int = 50, bits: int = 128) -> list[mpf]:
    """``N(m)`` followed by ``count`` points beyond it, dense near the threshold."""
    start = asy.threshold_N(m, bits)
    with mpmath.workprec(bits):
        return [start] + [start + mpf(i * i) / 4 for i in range(1, count + 1)]


def verify_lemma_2_1(m: int, count: int = 50, precision_bits: int = 128) -> VerificationReport:
    """Check ``10 x^m e^{-x/2} < 1`` at ``x = N(m)`` and ``count`` larger points."""
    started = time.perf_counter()
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    bits = resolve_bits(precision_bits, 0)
    points = lemma_2_1_points(m, count, bits)
    records = []
    for i, x in enumerate(points):
        def fn(p, x=x):
            return 10 * mpf(x) ** m * mpmath.exp(-mpf(x) / 2), mpf(1)
        vals = []
        for p in (bits, bits + GUARD_BITS):
            with mpmath.workprec(p):
                vals.append(fn(p)[0])
        with mpmath.workprec(bits + GUARD_BITS):
            slack = abs(vals[0] - vals[1])
            passed = vals[0] + slack < 1
        with mpmath.workprec(bits):
            margin = 1 - vals[0]
        records.append(Record(i, None, vals[0], margin, mpf(1), passed))
    return _report(Statement.LEMMA_2_1, {"m": m}, records, bits, started)


# ------------------------------------------------- two-term expansion


def verify_lemma_2_2(m: int, k: int, n_from: int | None = None, n_to: int | None = None,
                     stride: int | None = None,
                     precision_bits: int | None = None) -> VerificationReport:
    """Check the two-term expansion of ``p̄(n+k)`` with relative error at most ``μ^{-m}``."""
    started = time.perf_counter()
    if m < 2:
        raise DomainError(f"the lemma needs m >= 2, got {m}")
    threshold = asy.threshold_N0(m)
    n_from = threshold if n_from is None else n_from
    if n_from < threshold:
        raise PreconditionError(f"n_from={n_from} is below N_0({m}) = {threshold}", threshold)
    if n_from + k < 1:
        raise DomainError(f"n + k must be >= 1, got {n_from + k}")
    n_to = n_from + DENSE_SPAN if n_to is None else n_to
    points = sample_points(n_from, n_to, stride)
    bits = resolve_bits(precision_bits, n_to + abs(k))
    table = overpartitions(n_to + max(k, 0))

    records = []
    for n in points:
        exact = table[n + k]
        out = []
        for p in (bits, bits + GUARD_BITS):
            with mpmath.workprec(p):
                x = mpf(n + k)
                mu = mpmath.pi * mpmath.sqrt(x)
                scale = mpmath.exp(mu) / (8 * x)
                rel = mpf(exact) / scale - 1 + 1 / mu
                out.append((scale * (1 - 1 / mu), rel, mu ** (-m)))
        (approx, rel, bound), (_, rel1, bound1) = out
        with mpmath.workprec(bits + GUARD_BITS):
            slack = abs(rel - rel1) + abs(bound - bound1)
        records.append(Record(n, exact, approx, rel, bound, _within(rel, bound, slack, bits)))
    return _report(Statement.LEMMA_2_2, {"m": m, "k": k, "n_from": n_from, "n_to": n_to},
                   records, bits, started)


# ------------------------------------------------------- Wang–Xie–Zhang bound


def wxz_upper_bound(n: int, r: int, zeta_upper: mpf) -> mpf:
    """``2^{r-3} (1 - 2^{-3/2}) ζ(3/2) e^{π√(n+r)} / (n+r)`` at the active precision."""
    x = mpf(n + r)
    return mpf(2) ** (r - 3) * (1 - mpf(2) ** mpf(-1.5)) * zeta_upper \
        * mpmath.exp(mpmath.pi * mpmath.sqrt(x)) / x


def verify_wxz(r: int, n_from: int | None = None, n_to: int = 5000, stride: int | None = 1,
               precision_bits: int | None = None) -> VerificationReport:
    """Check ``0 < Δ^r(p̄)(n) < upper bound`` over a range.

    Small n are expected to fail (the differences alternate in sign there);
    ``summary["suffix_start"]`` reports where the all-pass suffix begins.
    """
    started = time.perf_counter()
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    n_from = r if n_from is None else n_from
    if n_from < r:
        raise PreconditionError(f"n_from={n_from} must be >= r={r}", r)
    points = sample_points(n_from, n_to, stride)
    bits = resolve_bits(precision_bits, n_to + r)
    table = overpartitions(n_to)
    spec = DifferenceSpec(j=1, r=r)
    _, zeta_hi = asy.zeta_three_halves(bits=bits + GUARD_BITS)

    records = []
    for n in points:
        exact = shifted_difference(table, spec, n)
        out = []
        for p in (bits, bits + GUARD_BITS):
            with mpmath.workprec(p):
                upper = wxz_upper_bound(n, r, zeta_hi)
                out.append((upper, upper - mpf(exact)))
        (upper, margin), (_, margin1) = out
        with mpmath.workprec(bits + GUARD_BITS):
            slack = abs(margin - margin1)
            passed = exact > 0 and margin - slack > 0
        records.append(Record(n, exact, upper, margin, upper, passed))
    report = _report(Statement.WXZ_UPPER, {"r": r, "n_from": n_from, "n_to": n_to},
                     records, bits, started)
    report.summary["suffix_start"] = report.passing_suffix_start()
    return report


def positivity_threshold(r: int, j: int, scan_max: int) -> int | None:
    """Smallest ``n0`` with ``Δ_j^r(p̄)(n) > 0`` for every ``n0 <= n <= scan_max``.

    Purely empirical: nothing is claimed beyond ``scan_max``.  Returns None
    when ``Δ_j^r(p̄)(scan_max)`` itself is not positive.
    """
    if r < 1 or j < 1:
        raise DomainError("r and j must be >= 1")
    first = r * j
    if scan_max < first:
        raise DomainError(f"scan_max must be >= r*j = {first}")
    diffs = difference_sequence(overpartitions(scan_max).values, DifferenceSpec(j=j, r=r))
    if diffs[-1] <= 0:
        return None
    i = len(diffs) - 1
    while i > 0 and diffs[i - 1] > 0:
        i -= 1
    return first + i


def positivity_report(r: int, j: int, n_from: int, n_to: int) -> VerificationReport:
    """Sign of ``Δ_j^r(p̄)(n)`` over ``[n_from, n_to]``, one record per n."""
    started = time.perf_counter()
    if n_from < r * j:
        raise PreconditionError(f"n_from must be >= r*j = {r * j}", r * j)
    table = overpartitions(n_to)
    spec = DifferenceSpec(j=j, r=r)
    zero = mpf(0)
    records = []
    for n in range(n_from, n_to + 1):
        exact = shifted_difference(table, spec, n)
        records.append(Record(n, exact, zero, mpf(exact), zero, exact > 0))
    report = _report(Statement.WXZ_POSITIVITY, {"r": r, "j": j, "n_from": n_from, "n_to": n_to},
                     records, 64, started)
    report.summary["suffix_start"] = report.passing_suffix_start()
    return report


# ---------------------------------------------------------- corollary ratio


def _corollary_lead(r: int, j: int, n: int) -> mpf:
    nn = mpf(n)
    return (mpmath.pi * j / 2) ** r * mpmath.exp(mpmath.pi * mpmath.sqrt(nn)) \
        / (8 * nn ** (mpf(r) / 2 + 1))


def corollary_envelope(r: int, j: int, n: int, bits: int) -> mpf:
    """Largest ``|ρ(n) - 1|`` allowed by the order ``r+2`` expansion of ``Δ_j^r(p̄)(n)``.

    ``Δ_j^r(p̄)(n)`` is the expanded quantity at argument ``n + j``, so the
    envelope is ``(|main(n+j) - lead(n)| + bound(n+j)) / lead(n)``.
    """
    exp = asy.expansion_diff_value(n + j, j, r, r + 2, bits)
    with mpmath.workprec(bits):
        lead = _corollary_lead(r, j, n)
        return (abs(exp.main.value - lead) + exp.bound.value) / lead


def corollary_ratio(r: int, j: int, n_list: Iterable[int],
                    precision_bits: int | None = None) -> VerificationReport:
    """Compare ``Δ_j^r(p̄)(n)`` with its leading asymptotic term.

    Passes when ``|ρ(n) - 1|`` lies inside :func:`corollary_envelope`.
    """
    started = time.perf_counter()
    if r < 1 or j < 1:
        raise DomainError("r and j must be >= 1")
    ns = sorted(set(n_list))
    if not ns:
        raise DomainError("n_list is empty")
    threshold = asy.n_min_diff(r + 2, r, j) - j
    if ns[0] < threshold:
        raise PreconditionError(
            f"n={ns[0]} is below the corollary threshold {threshold} for r={r}, j={j}", threshold)
    bits = resolve_bits(precision_bits, ns[-1] + j)
    table = overpartitions(ns[-1])
    spec = DifferenceSpec(j=j, r=r)

    records = []
    for n in ns:
        exact = shifted_difference(table, spec, n)
        out = []
        for p in (bits, bits + GUARD_BITS):
            with mpmath.workprec(p):
                lead = _corollary_lead(r, j, n)
                out.append((lead, mpf(exact) / lead - 1, corollary_envelope(r, j, n, p)))
        (lead, dev, env), (_, dev1, env1) = out
        with mpmath.workprec(bits + GUARD_BITS):
            slack = abs(dev - dev1) + abs(env - env1)
        records.append(Record(n, exact, lead, dev, env, _within(dev, env, slack, bits)))
    return _report(Statement.COROLLARY_RATIO, {"r": r, "j": j}, records, bits, started)
