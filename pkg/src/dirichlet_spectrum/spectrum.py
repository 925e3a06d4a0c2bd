"""Headline quantities assembled from per-height results.

A finite computation cannot certify a limsup, so the Dirichlet constant is
reported as an enclosure: its lower end is the best certified value of
Q^n·psi*(Q) over the scanned critical heights, its upper end the target
constant with the fixed upper-bound tolerance.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .construction import MAX_PHI_PRECISION, PhiFamily, Sequence, decide_less
from .errors import ArtifactError, InvalidArgument, RangeError
from .numerics import Enclosure, decimal_str, rational_str
from .oracle import psi_star_enclosure
from .witnesses import build_witness

UPPER_TOLERANCE = Fraction(1, 10**4)

CSV_HEADER = ["k", "Q", "psi_lo", "psi_hi", "norm_lo", "norm_hi", "method", "norm_lo_dec", "norm_hi_dec"]
RATIO_HEADER = ["k", "Q", "ratio_lo", "ratio_hi", "ratio_lo_dec", "ratio_hi_dec"]


class UpperBoundViolation(ArtifactError):
    pass


@dataclass(frozen=True)
class SpectrumRecord:
    k: int
    Q: int
    psi: Enclosure
    normalized: Enclosure
    method: str

    def csv_row(self) -> list:
        return [
            str(self.k), str(self.Q),
            rational_str(self.psi.lo), rational_str(self.psi.hi),
            rational_str(self.normalized.lo), rational_str(self.normalized.hi),
            self.method,
            decimal_str(self.normalized.lo, "down"), decimal_str(self.normalized.hi, "up"),
        ]


def _check_range(seq: Sequence, k_min: int, k_max: int) -> range:
    if k_min < 1 or k_max > seq.K - 1:
        raise RangeError(f"blocks {k_min}..{k_max} outside 1..{seq.K - 1}; rebuild with depth >= {k_max + 1}")
    return range(k_min, k_max + 1)


def _record(args) -> SpectrumRecord:
    seq, k = args
    Q = seq.term(seq.n * k + 1) - 1
    res = psi_star_enclosure(seq, Q)
    return SpectrumRecord(k, Q, res.value, res.normalized, res.method)


def theta_scan(seq: Sequence, k_min: int, k_max: int, workers: int = 1) -> list:
    ks = _check_range(seq, k_min, k_max)
    jobs = [(seq, k) for k in ks]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_record, jobs))
    else:
        records = [_record(j) for j in jobs]
    records.sort(key=lambda r: r.k)
    if seq.c is not None:
        cap = seq.c * (1 + UPPER_TOLERANCE)
        for r in records:
            if r.normalized.hi > cap:
                raise UpperBoundViolation(f"block k={r.k}: normalized upper end exceeds c·(1+1e-4)")
    return records


def theta_estimate(records, c: Fraction) -> Enclosure:
    if not records:
        raise InvalidArgument("theta_estimate needs at least one record")
    return Enclosure(max(r.normalized.lo for r in records), Fraction(c) * (1 + UPPER_TOLERANCE))


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def liouville_check(seq: Sequence, N: int, k: int) -> bool:
    """Does the top-interval form at Q = a_{nk+1} give psi*(Q) <= Q^-N?"""
    if not 1 <= k <= seq.K - 1:
        raise RangeError(f"block k={k} outside 1..{seq.K - 1}")
    Q = seq.term(seq.n * k + 1)
    w = build_witness(seq, Q)
    return w.value.hi * Q**N <= 1


# ---------------------------------------------------------------------------
# Generalized target functions
# ---------------------------------------------------------------------------


def _phi_tight(phi: PhiFamily, t: int, rel: Fraction = Fraction(1, 10**12)) -> Enclosure:
    prec = 64
    while True:
        e = phi.enclose(t, prec)
        if e.is_point() or e.width <= rel * e.lo or prec >= MAX_PHI_PRECISION:
            return e
        prec *= 2


def phi_ratio_scan(seq: Sequence, k_min: int, k_max: int, phi: PhiFamily = None) -> list:
    """Enclosures of psi*(Q)/phi(Q) at the critical heights Q = a_{nk+1} - 1."""
    phi = phi or seq.phi
    if phi is None:
        raise InvalidArgument("phi_ratio_scan needs a phi function")
    out = []
    for k in _check_range(seq, k_min, k_max):
        Q = seq.term(seq.n * k + 1) - 1
        psi = psi_star_enclosure(seq, Q).value
        out.append((k, Q, psi / _phi_tight(phi, Q)))
    return out


def ratio_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RATIO_HEADER)
    for k, Q, e in rows:
        w.writerow([str(k), str(Q), rational_str(e.lo), rational_str(e.hi),
                    decimal_str(e.lo, "down"), decimal_str(e.hi, "up")])
    return buf.getvalue()


@dataclass(frozen=True)
class AdmissibilityReport:
    """HEURISTIC: samples the decay condition exactly and the regularity condition numerically."""

    decay: tuple
    min_ratio: Enclosure
    ratios: tuple

    @property
    def decay_passed(self) -> bool:
        return all(ok for _, ok in self.decay)

    def to_json(self) -> dict:
        return {
            "label": "HEURISTIC",
            "decay_pass": self.decay_passed,
            "decay": [{"t": str(t), "pass": ok} for t, ok in self.decay],
            "min_ratio_lo": decimal_str(self.min_ratio.lo, "down"),
            "min_ratio_hi": decimal_str(self.min_ratio.hi, "up"),
            "ratios": [{"t": str(t), "j": j, "lo": decimal_str(e.lo, "down"), "hi": decimal_str(e.hi, "up")}
                       for t, j, e in self.ratios],
        }


def check_phi_admissible(phi: PhiFamily, n: int, samples) -> AdmissibilityReport:
    samples = [int(t) for t in samples]
    if not samples or any(b <= a for a, b in zip(samples, samples[1:])):
        raise InvalidArgument("sample points must be a nonempty increasing list")
    decay = []
    for t in samples:
        try:
            ok = decide_less(lambda p: phi.enclose(t, p), Fraction(1, t**n), f"phi({t}) < t^-{n}")
        except ArtifactError:
            ok = False
        decay.append((t, ok))
    ratios = []
    for t in samples:
        base = _phi_tight(phi, t)
        for j in range(1, 7):
            # ceil((1 + 2^-j)·t)
            s = t + -(-t >> j)
            ratios.append((t, j, _phi_tight(phi, s) / base))
    low = min(ratios, key=lambda x: x[2].lo)[2]
    return AdmissibilityReport(tuple(decay), low, tuple(ratios))
