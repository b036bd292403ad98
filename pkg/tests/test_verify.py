import mpmath
import pytest
from mpmath import mpf

from overasym import asymptotics as asy
from overasym.errors import DomainError, PreconditionError
from overasym.exact import DifferenceSpec, overpartitions, shifted_difference
from overasym.verify import (
    Record, Statement, VerificationReport, corollary_ratio, positivity_report,
    positivity_threshold, records_from_csv, sample_points, verify_lemma_2_1,
    verify_lemma_2_2, verify_theorem_1_1, verify_theorem_1_2, verify_wxz,
)


def test_sample_points_dense_then_geometric():
    pts = sample_points(10, 5000)
    assert pts[:501] == list(range(10, 511))
    tail = pts[501:]
    assert tail[-1] == 5000
    assert all(b > a for a, b in zip(pts, pts[1:]))
    assert all(b <= a * 1.5 + 1 for a, b in zip(pts[500:], pts[501:]))
    assert sample_points(5, 20, 7) == [5, 12, 19, 20]
    with pytest.raises(DomainError):
        sample_points(10, 9)


def test_shift_expansion_passes_past_threshold():
    report = verify_theorem_1_1(1, 1)
    assert report.verdict
    assert report.records[0].n == asy.n_min(1, 1)
    assert len(report.records) == 501
    assert report.statement_id is Statement.THM_1_1


def test_shift_expansion_negative_shift():
    report = verify_theorem_1_1(3, -2, n_to=asy.n_min(3, -2) + 299)
    assert report.verdict and len(report.records) == 300


def test_shift_expansion_records_are_exact():
    report = verify_theorem_1_1(2, 3, n_to=asy.n_min(2, 3) + 5)
    table = overpartitions(200)
    for rec in report.records:
        assert rec.exact == table[rec.n + 3]
        with mpmath.workprec(report.precision_bits):
            assert rec.remainder == mpf(rec.exact) - rec.approx


def test_below_threshold_probes_rejected():
    with pytest.raises(PreconditionError) as info:
        verify_theorem_1_1(1, 1, n_from=asy.n_min(1, 1) - 1)
    assert info.value.n_min == asy.n_min(1, 1)
    with pytest.raises(PreconditionError):
        verify_theorem_1_2(2, 2, 1, n_from=asy.n_min_diff(2, 2, 1) - 1)
    with pytest.raises(PreconditionError):
        verify_lemma_2_2(2, 1, n_from=asy.threshold_N0(2) - 1)
    with pytest.raises(PreconditionError):
        verify_wxz(3, n_from=2)


def test_difference_expansion():
    assert verify_theorem_1_2(2, 2, 1, n_to=asy.n_min_diff(2, 2, 1) + 299).verdict
    assert verify_theorem_1_2(3, 2, 3).verdict
    with pytest.raises(DomainError):
        verify_theorem_1_2(1, 2, 1)


def test_difference_expansion_records_use_shifted_argument():
    report = verify_theorem_1_2(1, 1, 2, n_to=asy.n_min_diff(1, 1, 2) + 3)
    table = overpartitions(100)
    for rec in report.records:
        assert rec.exact == table[rec.n - 2] - table[rec.n - 4]


def test_violation_is_a_finding_not_an_error():
    # A bound that is too tight must be recorded as a failure.
    rec_ok = Record(1, 2, mpf(1), mpf(1), mpf(2), True)
    rec_bad = Record(2, 2, mpf(1), mpf(1), mpf(0.5), False)
    report = VerificationReport(Statement.THM_1_1, {}, [rec_bad, rec_ok], 64)
    assert report.records[0].n == 1
    assert not report.verdict
    assert report.failures() == [rec_bad]
    assert report.passing_suffix_start() is None


def test_threshold_inequality():
    for m in [1] + list(range(3, 13)):
        report = verify_lemma_2_1(m)
        assert report.verdict, m
        assert len(report.records) == 51


def test_threshold_inequality_fails_just_past_n_of_2():
    # 10 x^2 e^{-x/2} only drops below 1 near x = 15.59, past N(2) = 14.596.
    report = verify_lemma_2_1(2)
    assert not report.verdict
    assert [r.n for r in report.failures()] == [0, 1]
    assert report.records[0].approx > mpf("1.44")
    assert report.passing_suffix_start() == 2


def test_two_term_expansion():
    assert verify_lemma_2_2(2, 1).verdict
    report = verify_lemma_2_2(3, -1, n_to=asy.threshold_N0(3) + 199)
    assert report.verdict and len(report.records) == 200
    with pytest.raises(DomainError):
        verify_lemma_2_2(1, 1)


def test_wxz():
    report = verify_wxz(1, 50, 3000)
    assert report.verdict
    report = verify_wxz(4, 200, 5000)
    assert report.summary["suffix_start"] == 200
    small = verify_wxz(3, 3, 60)
    assert not small.verdict
    assert small.summary["suffix_start"] is not None
    failing = [r.n for r in small.failures()]
    assert max(failing) < small.summary["suffix_start"]


def test_wxz_upper_uses_zeta_upper_end():
    report = verify_wxz(1, 50, 52)
    lo, hi = asy.zeta_three_halves(bits=report.precision_bits + 32)
    with mpmath.workprec(report.precision_bits):
        rec = report.records[0]
        x = mpf(51)
        expected = mpf(2) ** -2 * (1 - mpf(2) ** -1.5) * hi * mpmath.exp(mpmath.pi * mpmath.sqrt(x)) / x
        assert abs(rec.bound - expected) < expected * mpf(2) ** -100


def test_positivity_threshold():
    assert positivity_threshold(1, 1, 1000) == 1
    n0 = positivity_threshold(2, 1, 5000)
    assert n0 is not None and n0 <= 10
    n6 = positivity_threshold(6, 1, 20000)
    assert n6 > 6
    table = overpartitions(20000)
    spec = DifferenceSpec(j=1, r=6)
    assert shifted_difference(table, spec, n6 - 1) <= 0
    assert all(shifted_difference(table, spec, n) > 0 for n in range(n6, n6 + 200))


def test_positivity_report_agrees_with_threshold():
    report = positivity_report(5, 1, 5, 2000)
    assert report.summary["suffix_start"] == positivity_threshold(5, 1, 2000)


def test_corollary_ratio():
    assert corollary_ratio(1, 1, [10 ** 4]).verdict
    assert corollary_ratio(2, 2, [4 * 10 ** 4]).verdict


@pytest.mark.slow
def test_corollary_ratio_decreasing():
    report = corollary_ratio(1, 1, [10 ** 5, 10 ** 3, 10 ** 4])
    devs = [abs(r.remainder) for r in report.records]
    assert [r.n for r in report.records] == [10 ** 3, 10 ** 4, 10 ** 5]
    assert devs[0] > devs[1] > devs[2]
    assert report.verdict


def test_reports_are_deterministic():
    a = verify_theorem_1_2(2, 1, 2, n_to=asy.n_min_diff(2, 1, 2) + 20)
    b = verify_theorem_1_2(2, 1, 2, n_to=asy.n_min_diff(2, 1, 2) + 20)
    assert a.to_csv() == b.to_csv()
    assert a.to_json() == b.to_json()


def test_csv_json_round_trip():
    report = verify_theorem_1_1(2, -3, n_to=asy.n_min(2, -3) + 30)
    from_csv = records_from_csv(report.to_csv(), report.precision_bits)
    from_json = VerificationReport.from_json(report.to_json(include_runtime=True))
    assert from_csv == report.records
    assert from_json.records == report.records
    assert from_json.statement_id is report.statement_id
    assert from_json.parameters == report.parameters
    assert from_json.runtime_ms == report.runtime_ms
    assert report.to_csv().splitlines()[0] == "n,exact,approx,remainder,bound,pass"


def test_threshold_inequality_round_trip_with_missing_exact():
    report = verify_lemma_2_1(3)
    assert records_from_csv(report.to_csv(), report.precision_bits) == report.records


def test_corollary_below_threshold():
    threshold = asy.n_min_diff(3, 1, 1) - 1
    with pytest.raises(PreconditionError):
        corollary_ratio(1, 1, [threshold - 1])
    assert corollary_ratio(1, 1, [threshold]).verdict
