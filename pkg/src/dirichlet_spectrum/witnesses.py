"""Explicit sparse integer forms bounding psi*(Q) from above.

Every height Q >= a_n falls in a block [a_{nk}, a_{n(k+1)}) and, inside
it, in one of three intervals.  Each interval comes with a form having at
most three nonzero coefficients whose value at the vector is tiny.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .construction import Sequence, partial_sums, tail_enclosure, xi_enclosure
from .errors import ConstructionIntegrityError, IndecisiveEnclosure, InvalidArgument, RangeError
from .numerics import Enclosure, nearest_integer, rational_str

CASE_TOP = 1  # Q in [a_{nk+1}, a_{n(k+1)})
CASE_LOW = 2  # Q in [a_{nk}, N_{k-1}(k))
CASE_MID = 3  # Q in [N_{k-1}(k), a_{nk+1})


@dataclass(frozen=True)
class CaseTag:
    case: int
    k: int
    e: Optional[int] = None

    def __post_init__(self):
        if self.case not in (1, 2, 3) or self.k < 1:
            raise InvalidArgument(f"bad case tag {self}")
        if self.case == 3 and not (self.e is not None and 0 <= self.e <= self.k - 1):
            raise InvalidArgument(f"case 3 needs 0 <= e <= k-1, got e={self.e}")


@dataclass(frozen=True)
class WitnessForm:
    b: tuple
    tag: CaseTag
    Q: int
    value: Enclosure
    depth: int

    @property
    def height(self) -> int:
        return max(abs(x) for x in self.b[1:])

    def to_json(self) -> dict:
        return {
            "Q": str(self.Q),
            "case": str(self.tag.case),
            "k": self.tag.k,
            "e": self.tag.e,
            "b": [str(x) for x in self.b],
            "value_lo": rational_str(self.value.lo),
            "value_hi": rational_str(self.value.hi),
        }


@lru_cache(maxsize=256)
def _all_N(seq: Sequence, k: int) -> tuple:
    n = seq.n
    top = seq.term(n * k + 1)
    out = []
    for ell in range(k):
        val = top * seq.term(n * ell) * sum(Fraction(1, seq.term(n * h)) for h in range(ell + 1, k + 1))
        if val.denominator != 1:
            raise ConstructionIntegrityError(f"N_{ell}({k}) = {val} is not an integer")
        out.append(val.numerator)
    for ell in range(1, k):
        if not out[ell - 1] > out[ell]:
            raise ConstructionIntegrityError(f"N_{ell - 1}({k}) <= N_{ell}({k})")
    return tuple(out)


def compute_N(seq: Sequence, k: int, ell: int) -> int:
    """N_ell(k) = a_{nk+1}·a_{n·ell}·(1/a_{n(ell+1)} + ... + 1/a_{nk})."""
    if not 0 <= ell <= k - 1:
        raise InvalidArgument(f"need 0 <= ell <= k-1, got ell={ell}, k={k}")
    return _all_N(seq, k)[ell]


def classify_Q(seq: Sequence, Q: int) -> CaseTag:
    n, K = seq.n, seq.K
    if Q < seq.term(n):
        raise RangeError(f"Q={Q} is below a_n={seq.term(n)}; the first block starts there")
    if Q >= seq.term(n * K):
        raise RangeError(f"Q={Q} is beyond a_{{nK}}; rebuild with depth K > {K}")
    k = next(k for k in range(1, K) if Q < seq.term(n * (k + 1)))
    a_nk, a_next = seq.term(n * k), seq.term(n * k + 1)
    if Q * a_nk < a_next * seq.term(n * (k - 1)):
        return CaseTag(CASE_LOW, k)
    if Q >= a_next:
        return CaseTag(CASE_TOP, k)
    Ns = _all_N(seq, k)
    e = next(ell for ell, N in enumerate(Ns) if Q >= N)
    return CaseTag(CASE_MID, k, e)


def _check_form(seq: Sequence, b) -> tuple:
    b = tuple(int(x) for x in b)
    if len(b) != seq.n + 1:
        raise InvalidArgument(f"form needs {seq.n + 1} coefficients, got {len(b)}")
    if not any(b):
        raise InvalidArgument("the zero form is excluded")
    return b


def evaluate_form(seq: Sequence, b, k: int) -> Enclosure:
    """Enclosure of |b_0 + b_1 xi_1 + ... + b_n xi_n| from truncation level k."""
    b = _check_form(seq, b)
    S = partial_sums(seq, k)
    exact = sum(bj * S[j] for j, bj in enumerate(b))
    tail = Enclosure.point(0)
    for j, bj in enumerate(b):
        if j and bj:
            tail = tail + tail_enclosure(seq, j, k, refined=True).scale(bj)
    return abs(tail + exact)


def _linear_part(seq: Sequence, b: tuple, k: int) -> Enclosure:
    acc = Enclosure.point(0)
    for j in range(1, seq.n + 1):
        if b[j]:
            acc = acc + xi_enclosure(seq, j, k).scale(b[j])
    return acc


def build_witness(seq: Sequence, Q: int) -> WitnessForm:
    tag = classify_Q(seq, Q)
    n, k = seq.n, tag.k
    b = [0] * (n + 1)
    if tag.case == CASE_TOP:
        b[1] = seq.term(n * k + 1)
    elif tag.case == CASE_LOW:
        b[n] = seq.term(n * k)
    else:
        b[1] = compute_N(seq, k, tag.e)
        b[n] = -seq.term(n * tag.e)
    for depth in range(k, seq.K):
        x = _linear_part(seq, tuple(b), depth)
        m = nearest_integer(x.lo)
        if m == nearest_integer(x.hi):
            break
    else:
        raise IndecisiveEnclosure(
            f"nearest integer for the constant term at Q={Q} is undecided at depth {seq.K - 1}"
        )
    b[0] = -m
    b = tuple(b)
    if max(abs(x) for x in b[1:]) > Q:
        raise ConstructionIntegrityError(f"witness at Q={Q} exceeds the height bound")
    return WitnessForm(b, tag, Q, evaluate_form(seq, b, depth), depth)
