"""Exact checks of the number-theoretic facts behind the bounds.

Three kinds of record are produced here: reducedness of the partial sums
S_{i,k}, a lower bound on psi*(Q) at the critical heights
Q = a_{nk+1} - 1, and a per-block report on the growth inequalities the
upper-bound witnesses rely on.  Fractional powers are never taken; every
inequality is decided by cross-multiplying integer powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .construction import Sequence, ceil_div, decide_less, partial_sum
from .errors import CertificateRefused, ConstructionIntegrityError, IndecisiveEnclosure, InvalidArgument, RangeError
from .numerics import rational_str
from .witnesses import CASE_LOW, CASE_TOP, WitnessForm, _all_N


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


def _failed(checks) -> list:
    return [c for c in checks if not c.passed]


# ---------------------------------------------------------------------------
# Reducedness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReducednessCert:
    i: int
    k: int
    numerator: int
    denominator: int
    G: Optional[int] = None
    H: Optional[int] = None
    checks: tuple = ()

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "k": self.k,
            "value": f"{self.numerator}/{self.denominator}",
            "G": None if self.G is None else str(self.G),
            "H": None if self.H is None else str(self.H),
            "checks": [c.to_json() for c in self.checks],
        }


def _reducedness_checks(seq: Sequence, i: int, k: int):
    n = seq.n
    top = seq.term(n * k + i)
    raw = sum(top // seq.term(n * h + i) for h in range(k + 1))
    checks = [Check("gcd", math.gcd(raw, top) == 1, f"gcd(numerator, a_{n * k + i}) = {math.gcd(raw, top)}")]
    S = partial_sum(seq, i, k)
    checks.append(Check("denominator", S.denominator == top, f"S_{{{i},{k}}} has denominator a_{n * k + i}"))
    G = H = None
    if k >= 1:
        M = seq.M(k)
        if i < n:
            v = seq.term(n * (k - 1) + i)
            G, r = divmod(seq.term(n * k), v)
            ok = r == 0 and top == (v * G) ** (i * M)
            if ok and k >= 2 and seq.variant == "theorem1":
                base = seq.term(n * (k - 1) + 1)
                closed = base ** (n - 1 - i) * ceil_div(base * seq.c.denominator, seq.c.numerator)
                ok = closed == G
            checks.append(Check("power_form", ok, f"a_{n * k + i} = (a_{n * (k - 1) + i}·G)^({i}·M_{k})"))
            modulus = v * G
        else:
            v = seq.term(n * k)
            H, r = divmod(top, seq.term(n * k + n - 1))
            ok = r == 0 and top == H * v ** (M * (n - 1))
            if ok and seq.variant == "theorem1":
                ok = H == ceil_div(seq.term(n * k + 1) * seq.c.denominator, seq.c.numerator)
            checks.append(Check("power_form", ok, f"a_{n * (k + 1)} = H·a_{n * k}^(M_{k}·(n-1))"))
            modulus = v * H
        # numerator = 1 mod v·G (or v·H) covers every prime dividing the denominator
        congruent = modulus > 0 and S.numerator % modulus == 1 % modulus
        checks.append(Check("congruence", congruent, "numerator = 1 modulo the radical carrier"))
    return S, G, H, checks


def verify_reducedness(seq: Sequence, i: int, k: int) -> ReducednessCert:
    if not 1 <= i <= seq.n:
        raise InvalidArgument(f"index i={i} outside 1..{seq.n}")
    if not 0 <= k <= seq.K:
        raise RangeError(f"block k={k} outside 0..{seq.K}")
    S, G, H, checks = _reducedness_checks(seq, i, k)
    bad = _failed(checks)
    if bad:
        raise ConstructionIntegrityError(
            f"S_{{{i},{k}}} is not reduced over a_{seq.n * k + i}: " + ", ".join(c.name for c in bad)
        )
    return ReducednessCert(i, k, S.numerator, S.denominator, G, H, tuple(checks))


# ---------------------------------------------------------------------------
# Lower bound at the critical height
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LowerBoundCert:
    k: int
    Q: int
    main_term: Fraction
    tail_bound: Fraction
    lower: Fraction
    n: int
    preconditions: tuple = ()

    @property
    def normalized(self) -> Fraction:
        return self.lower * self.Q**self.n

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "Q": str(self.Q),
            "main_term": rational_str(self.main_term),
            "tail_bound": rational_str(self.tail_bound),
            "lower": rational_str(self.lower),
            "normalized": rational_str(self.normalized),
            "preconditions": [c.to_json() for c in self.preconditions],
        }


def _chain_check(seq: Sequence, upto: int) -> Check:
    bad = [i for i in range(1, min(upto, len(seq)))
           if seq.term(i + 1) % seq.term(i)]
    return Check("divisibility", not bad, "a_i | a_(i+1)" + (f" fails at i={bad[:5]}" if bad else ""))


def _growth_check(seq: Sequence) -> Check:
    bad = [i for i in range(1, len(seq)) if seq.term(i + 1) < 2 * seq.term(i)]
    return Check("growth", not bad, "a_(i+1) >= 2·a_i" + (f" fails at i={bad[:5]}" if bad else ""))


def lower_bound_certificate(seq: Sequence, k: int) -> LowerBoundCert:
    """psi*(Q) >= 1/a_{n(k+1)} - n·Q·2/a_{n(k+1)+1} at Q = a_{nk+1} - 1."""
    n = seq.n
    if not 1 <= k <= seq.K - 1:
        raise RangeError(f"lower bound at block k={k} needs 1 <= k <= K-1 = {seq.K - 1}")
    first = seq.term(n * k + 1)
    Q = first - 1
    checks = [_chain_check(seq, n * (k + 1) + 1), _growth_check(seq)]
    # |b_i| <= Q < a_{nk+1} <= a_{nk+i}/a_{nk+i-1}
    bad = [i for i in range(2, n + 1) if first * seq.term(n * k + i - 1) > seq.term(n * k + i)]
    checks.append(Check("height_chain", Q < first and not bad,
                        "a_(nk+1)·a_(nk+i-1) <= a_(nk+i)" + (f" fails for i={bad}" if bad else "")))
    for i in range(1, n + 1):
        sub = _reducedness_checks(seq, i, k)[3]
        checks.append(Check(f"reduced[i={i}]", not _failed(sub),
                            ", ".join(f"{c.name}={'ok' if c.passed else 'FAIL'}" for c in sub)))
    main = Fraction(1, seq.term(n * (k + 1)))
    tail = Fraction(2 * n * Q, seq.term(n * (k + 1) + 1))
    lower = main - tail
    checks.append(Check("lower_positive", lower > 0, f"lower = {rational_str(lower)}"))
    bad = _failed(checks)
    if bad:
        raise CertificateRefused(bad[0].name, "; ".join(c.detail for c in bad))
    return LowerBoundCert(k, Q, main, tail, lower, n, tuple(checks))


# ---------------------------------------------------------------------------
# Schedule report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScheduleReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return _failed(self.checks)

    def to_json(self) -> dict:
        return {"pass": self.passed, "checks": [c.to_json() for c in self.checks]}


def _recursion_check(seq: Sequence, k: int) -> Check:
    n = seq.n
    base = seq.term(n * k + 1)
    ok = base == seq.term(n * k) ** seq.M(k)
    ok = ok and all(seq.term(n * k + i) == base**i for i in range(2, n))
    top = seq.term(n * (k + 1))
    if seq.variant == "theorem1":
        ok = ok and top == ceil_div(base * seq.c.denominator, seq.c.numerator) * seq.term(n * k + n - 1)
    return Check(f"recursion[k={k}]", ok, "block terms follow the recursion")


def _case1_tail_check(seq: Sequence, k: int) -> Check:
    # 2·a_{nk+1}/a_{n(k+1)+1} < target at a_{n(k+1)} (c·t^-n, or phi(t))
    n = seq.n
    small, top, nxt = seq.term(n * k + 1), seq.term(n * (k + 1)), seq.term(n * (k + 1) + 1)
    name = f"case1_tail[k={k}]"
    if seq.variant == "theorem1":
        c = seq.c
        ok = 2 * small * top**n * c.denominator < c.numerator * nxt
        return Check(name, ok, f"2·a_{n * k + 1}/a_{n * (k + 1) + 1} < c·a_{n * (k + 1)}^-{n}")
    lhs = Fraction(2 * small, nxt)
    try:
        ok = decide_less(lambda p: -seq.phi.enclose(top, p), -lhs, name)
    except IndecisiveEnclosure as exc:
        return Check(name, False, str(exc))
    return Check(name, ok, f"2·a_{n * k + 1}/a_{n * (k + 1) + 1} < phi(a_{n * (k + 1)})")


def check_schedule(seq: Sequence) -> ScheduleReport:
    n, K = seq.n, seq.K
    checks = [_chain_check(seq, len(seq)), _growth_check(seq)]
    for k in range(1, K + 1):
        try:
            M = seq.M(k)
            checks.append(Check(f"schedule_min[k={k}]", M >= 2, f"M_{k} = {M}"))
        except Exception as exc:  # list schedule too short
            checks.append(Check(f"schedule_min[k={k}]", False, str(exc)))
            continue
        checks.append(_recursion_check(seq, k))
        checks.append(Check(f"block_top[k={k}]", seq.term(n * (k + 1)) > seq.term(n * k + 1) ** n,
                            f"a_{n * (k + 1)} > a_{n * k + 1}^{n}"))
        # 2·a_{n(k-1)} < a_{nk}^(1-1/n)  <=>  (2·a_{n(k-1)})^n < a_{nk}^(n-1)
        checks.append(Check(f"case2_gap[k={k}]",
                            (2 * seq.term(n * (k - 1))) ** n < seq.term(n * k) ** (n - 1),
                            f"(2·a_{n * (k - 1)})^{n} < a_{n * k}^{n - 1}"))
        # a_{n(e-1)} <= a_{ne}^(1/2)/4  <=>  16·a_{n(e-1)}^2 <= a_{ne}
        e = k
        checks.append(Check(f"case3_gap[e={e}]",
                            16 * seq.term(n * (e - 1)) ** 2 <= seq.term(n * e),
                            f"16·a_{n * (e - 1)}^2 <= a_{n * e}"))
        try:
            _all_N(seq, k)
            checks.append(Check(f"n_monotone[k={k}]", True, f"N_0({k}) > ... > N_{k - 1}({k}), all integers"))
        except ConstructionIntegrityError as exc:
            checks.append(Check(f"n_monotone[k={k}]", False, str(exc)))
        if k <= K - 1:
            checks.append(_case1_tail_check(seq, k))
    return ScheduleReport(tuple(checks))


# ---------------------------------------------------------------------------
# Integrality of the witness constant terms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntegralityRecord:
    checks: tuple
    values: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks],
                "values": {k: rational_str(v) for k, v in self.values.items()}}


def integrality_checks(seq: Sequence, w: WitnessForm) -> IntegralityRecord:
    n, k, b = seq.n, w.tag.k, w.b
    checks, values = [], {}
    if w.tag.case == CASE_TOP:
        closed = -b[1] * partial_sum(seq, 1, k)
        checks.append(Check("constant_term", closed == b[0], "b_0 = -b_1·S_{1,k}"))
    elif w.tag.case == CASE_LOW:
        closed = -b[n] * partial_sum(seq, n, k - 1)
        checks.append(Check("constant_term", closed == b[0], "b_0 = -b_n·S_{n,k-1}"))
    else:
        e = w.tag.e
        prev = b[1] * partial_sum(seq, 1, k - 1)
        values["b1_S1_prev"] = prev
        checks.append(Check("b1_S1_prev_integral", prev.denominator == 1, "b_1·S_{1,k-1} is an integer"))
        U = sum(Fraction(seq.term(n * k), seq.term(n * h)) for h in range(e + 1, k + 1))
        values["U"] = U
        T = seq.term(n * (k - 1) + 1) * partial_sum(seq, 1, k - 1)
        factored = U * seq.term(n * e) * Fraction(seq.term(n * k + 1), seq.term(n * (k - 1) + 1) * seq.term(n * k)) * T
        checks.append(Check("U_factorization", U.denominator == 1 and T.denominator == 1 and factored == prev,
                            "b_1·S_{1,k-1} = U·a_{ne}·(a_{nk+1}/(a_{n(k-1)+1}·a_{nk}))·(a_{n(k-1)+1}·S_{1,k-1})"))
        top = seq.term(n * (k + 1))
        ident = Fraction(b[1], seq.term(n * k + 1)) - seq.term(n * e) * (partial_sum(seq, n, k) - Fraction(1, top))
        expected = -seq.term(n * e) * sum(Fraction(1, seq.term(n * h)) for h in range(1, e + 1))
        values["adjusted_identity"] = ident
        checks.append(Check("adjusted_identity", ident.denominator == 1 and ident == expected,
                            "N_e/a_{nk+1} - a_{ne}(S_{n,k} - 1/a_{n(k+1)}) = -a_{ne}·sum_{h<=e} 1/a_{nh}"))
        div = seq.term(n * k + 1) % (seq.term(n * (k - 1) + 1) * seq.term(n * k)) == 0
        checks.append(Check("divides", div, "a_{n(k-1)+1}·a_{nk} | a_{nk+1}"))
        checks.append(Check("constant_term", b[0] == -(prev + ident), "b_0 = -(b_1·S_{1,k-1} + identity)"))
    bad = _failed(checks)
    if bad:
        raise ConstructionIntegrityError("integrality: " + ", ".join(c.name for c in bad))
    return IntegralityRecord(tuple(checks), values)


# ---------------------------------------------------------------------------
# Witness upper bound
# ---------------------------------------------------------------------------

WITNESS_TOLERANCE = Fraction(1, 10**4)


def sample_heights(seq: Sequence) -> list:
    """Case boundaries of every certifiable block, where the witness bound is tightest."""
    n = seq.n
    out = set()
    for k in range(1, seq.K):
        lo, mid, hi = seq.term(n * k), seq.term(n * k + 1), seq.term(n * (k + 1))
        out.update((lo, lo + 1, mid - 1, mid, hi - 1))
        for N in _all_N(seq, k):
            out.update((N - 1, N))
    return sorted(q for q in out if seq.term(n) <= q < seq.term(n * seq.K))


def witness_bound_check(seq: Sequence, w: WitnessForm) -> Check:
    """Witness value against the target c·Q^-n (or phi(Q)).

    The top and low intervals must beat the target strictly; the middle
    interval carries the fixed tolerance factor 1 + 1e-4.
    """
    Q, n = w.Q, seq.n
    slack = 1 if w.tag.case in (CASE_TOP, CASE_LOW) else 1 + WITNESS_TOLERANCE
    name = f"witness_bound[Q={Q}]"
    detail = f"case {w.tag.case}, k={w.tag.k}: Q^{n}·value <= {float(w.value.hi * Q**n):.9g}"
    if seq.variant == "theorem1":
        bound = seq.c * slack / Q**n
        ok = w.value.hi < bound if slack == 1 else w.value.hi <= bound
        return Check(name, ok, detail)
    try:
        ok = decide_less(lambda p: -seq.phi.enclose(Q, p).scale(slack), -w.value.hi, name)
    except IndecisiveEnclosure as exc:
        return Check(name, False, str(exc))
    return Check(name, ok, f"case {w.tag.case}, k={w.tag.k}: value vs phi(Q)")
