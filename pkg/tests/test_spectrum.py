from fractions import Fraction

import pytest

from conftest import make_phi_seq, make_seq
from dirichlet_spectrum import (
    PhiFamily,
    check_phi_admissible,
    liouville_check,
    phi_ratio_scan,
    theta_estimate,
    theta_scan,
)
from dirichlet_spectrum.errors import InvalidArgument, RangeError
from dirichlet_spectrum.spectrum import CSV_HEADER, UpperBoundViolation, ratio_csv, records_csv


def test_theta_scan_first_block(seq2):
    (rec,) = theta_scan(seq2, 1, 1)
    assert rec.Q == 255 and rec.method == "witness_plus_cert"
    assert Fraction(492, 1000) <= rec.normalized.lo <= rec.normalized.hi <= Fraction(497, 1000)


def test_theta_scan_converges(seq2_deep):
    recs = theta_scan(seq2_deep, 1, 3)
    for a, b in zip(recs, recs[1:]):
        assert b.normalized.lo >= a.normalized.lo - Fraction(1, 10**6)
    assert abs(recs[-1].normalized.lo - Fraction(1, 2)) < Fraction(1, 10**40)


def test_theta_scan_other_targets():
    for c in ("1/3", "9/10"):
        seq = make_seq(c=Fraction(c))
        rec = theta_scan(seq, 2, 2)[0]
        assert rec.normalized.hi <= Fraction(c)
        assert Fraction(c) - rec.normalized.lo < Fraction(1, 10**8)


def test_theta_scan_range(seq2):
    with pytest.raises(RangeError):
        theta_scan(seq2, 1, 3)


def test_theta_scan_workers_agree(seq2_deep):
    assert records_csv(theta_scan(seq2_deep, 1, 3, workers=2)) == records_csv(theta_scan(seq2_deep, 1, 3))


def test_upper_bound_violation_detected(seq2, monkeypatch):
    import dirichlet_spectrum.spectrum as spectrum
    monkeypatch.setattr(spectrum, "UPPER_TOLERANCE", Fraction(-1, 10))
    with pytest.raises(UpperBoundViolation):
        theta_scan(seq2, 1, 2)


def test_theta_estimate(seq2_deep):
    est = theta_estimate(theta_scan(seq2_deep, 1, 3), Fraction(1, 2))
    assert est.lo <= Fraction(1, 2) <= est.hi
    assert est.hi == Fraction(1, 2) * (1 + Fraction(1, 10**4))
    with pytest.raises(InvalidArgument):
        theta_estimate([], Fraction(1, 2))


def test_records_csv(seq2):
    text = records_csv(theta_scan(seq2, 1, 2))
    lines = text.splitlines()
    assert lines[0].split(",") == CSV_HEADER
    assert len(lines) == 3
    row = lines[1].split(",")
    assert Fraction(row[7]) <= Fraction(row[4]) and Fraction(row[5]) <= Fraction(row[8])


def test_liouville_constant_schedule(seq2_deep):
    for k in (1, 2, 3):
        assert liouville_check(seq2_deep, 3, k)
        assert not liouville_check(seq2_deep, 4, k)


def test_liouville_ramp_schedule():
    seq = make_seq(schedule="ramp:1", depth=4)
    for N in range(1, 6):
        assert any(liouville_check(seq, N, k) for k in range(1, 4))


def test_liouville_range(seq2):
    with pytest.raises(RangeError):
        liouville_check(seq2, 2, 3)


def test_phi_ratio_examples():
    rows = phi_ratio_scan(make_phi_seq("power:1/2:2"), 1, 2)
    (_, _, r1), (_, _, r2) = rows
    assert Fraction(98, 100) <= r1.lo and r1.hi <= Fraction(1001, 1000)
    assert Fraction(9999, 10000) <= r2.lo and r2.hi <= Fraction(10001, 10000)
    assert ratio_csv(rows).startswith("k,Q,ratio_lo")


def test_phi_ratio_log_family():
    rows = phi_ratio_scan(make_phi_seq("powerlog:1:2:1"), 2, 2)
    assert abs(rows[0][2].lo - 1) < Fraction(1, 10**3)


def test_phi_ratio_needs_phi(seq2):
    with pytest.raises(InvalidArgument):
        phi_ratio_scan(seq2, 1, 1)


def test_admissibility_report():
    good = check_phi_admissible(PhiFamily.parse("power:1/2:2"), 2, [2, 10, 1000])
    assert good.decay_passed
    assert good.to_json()["label"] == "HEURISTIC"
    bad = check_phi_admissible(PhiFamily.parse("power:1:2"), 2, [2, 10, 1000])
    assert not bad.decay_passed
    mixed = check_phi_admissible(PhiFamily.parse("powerlog:1:2:1"), 2, [2, 3, 10])
    assert [ok for _, ok in mixed.decay] == [False, True, True]


def test_admissibility_ratios_approach_one():
    rep = check_phi_admissible(PhiFamily.parse("power:1:3"), 2, [10**6])
    finest = [e for t, j, e in rep.ratios if j == 6][0]
    assert Fraction(95, 100) < finest.lo < 1


def test_admissibility_needs_increasing_samples():
    with pytest.raises(InvalidArgument):
        check_phi_admissible(PhiFamily.parse("power:1:3"), 2, [10, 3])
