"""psi*(Q): exhaustive search at small Q, certified sandwich at large Q.

The exhaustive search runs entirely on integers.  Every coordinate
enclosure is rewritten as (C_j ± r_j)/D over one common denominator D, so
a candidate (b_1, ..., b_n) gives b·xi in (X ± R)/D with X and R exact
integers, and the best constant term is the integer nearest to X/D.
Distance to the nearest integer is 1-Lipschitz, which makes
[max(0, d - R), d + R] a valid enclosure of the optimal value for that
candidate without trying a second rounding.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional

from .certificates import lower_bound_certificate
from .construction import Sequence, xi_enclosure
from .errors import BudgetExceeded, InvalidArgument
from .numerics import Enclosure, decimal_str, rational_str
from .witnesses import WitnessForm, build_witness

DEFAULT_BUDGET = 10**8

EXHAUSTIVE = "exhaustive"
WITNESS_ONLY = "witness_only"
WITNESS_PLUS_CERT = "witness_plus_cert"


@dataclass(frozen=True)
class PsiResult:
    Q: int
    n: int
    value: Enclosure
    method: str
    argmin: Optional[tuple] = None
    ambiguous: bool = False
    witness: Optional[WitnessForm] = None

    @property
    def normalized(self) -> Enclosure:
        return self.value.scale(self.Q**self.n)

    def to_json(self) -> dict:
        norm = self.normalized
        d = {
            "Q": str(self.Q),
            "n": self.n,
            "method": self.method,
            "value_lo": rational_str(self.value.lo),
            "value_hi": rational_str(self.value.hi),
            "normalized_lo": rational_str(norm.lo),
            "normalized_hi": rational_str(norm.hi),
            "normalized_lo_dec": decimal_str(norm.lo, "down"),
            "normalized_hi_dec": decimal_str(norm.hi, "up"),
            "argmin": None if self.argmin is None else [str(x) for x in self.argmin],
            "ambiguous": self.ambiguous,
        }
        if self.witness is not None:
            d["witness"] = self.witness.to_json()
        return d


# ---------------------------------------------------------------------------
# Exhaustive search
# ---------------------------------------------------------------------------


def _integer_frame(encl):
    D = 1
    for e in encl:
        D = math.lcm(D, e.lo.denominator, e.hi.denominator)
    C = [int((e.lo + e.hi) * D) for e in encl]
    r = [int((e.hi - e.lo) * D) for e in encl]
    return C, r, 2 * D


def _tasks(n: int, Q: int) -> list:
    # canonical representatives: the first nonzero coefficient among b_1..b_n is positive
    return [(0,) * lead + (v,) for lead in range(n) for v in range(1, Q + 1)]


def _key(b_tail, b0):
    return (max(abs(x) for x in b_tail),) + tuple(b_tail) + (b0,)


def _scan(args):
    C, r, D2, Q, tasks = args
    n = len(C)
    D4 = 2 * D2
    best_vhi, best_key = math.inf, None
    low = []  # two smallest (vlo, key)
    low_max = math.inf
    exact = not any(r)
    rng = range(-Q, Q + 1)
    for prefix in tasks:
        p = len(prefix)
        X0 = sum(b * c for b, c in zip(prefix, C))
        R0 = sum(abs(b) * w for b, w in zip(prefix, r))
        free = n - p
        if free == 0:
            heads, Cl, rl = [()], 0, 0
            last_range = (0,)
        else:
            heads = product(rng, repeat=free - 1)
            Cl, rl = C[-1], r[-1]
            last_range = rng
        for head in heads:
            Xh = X0 + sum(b * c for b, c in zip(head, C[p:]))
            Rh = R0 + sum(abs(b) * w for b, w in zip(head, r[p:]))
            X = Xh + last_range[0] * Cl
            for bl in last_range:
                m = (2 * X + D2) // D4
                d = X - m * D2
                if d < 0:
                    d = -d
                if exact:
                    vhi = vlo = d
                else:
                    R = Rh + (bl if bl > 0 else -bl) * rl
                    vhi = d + R
                    vlo = d - R if d > R else 0
                if vhi <= best_vhi or vlo <= low_max:
                    tail = prefix + head + ((bl,) if free else ())
                    key = _key(tail, -m)
                    if vhi < best_vhi or (vhi == best_vhi and key < best_key):
                        best_vhi, best_key = vhi, key
                    if vlo <= low_max:
                        low.append((vlo, key))
                        low.sort()
                        del low[2:]
                        if len(low) == 2:
                            low_max = low[1][0]
                X += Cl
    return best_vhi, best_key, low


def _merge(parts):
    best_vhi, best_key, low = math.inf, None, []
    for vhi, key, lo in parts:
        if key is None:
            continue
        if vhi < best_vhi or (vhi == best_vhi and key < best_key):
            best_vhi, best_key = vhi, key
        low.extend(lo)
    low.sort()
    return best_vhi, best_key, low[:2]


def _chunks(tasks: list, parts: int) -> list:
    size = max(1, -(-len(tasks) // parts))
    return [tasks[i:i + size] for i in range(0, len(tasks), size)]


def psi_star_exhaustive(target, Q: int, *, k: Optional[int] = None, budget: int = DEFAULT_BUDGET,
                        workers: int = 1) -> PsiResult:
    """Minimum of |b_0 + b·xi| over nonzero integer b with max|b_i| <= Q.

    ``target`` is a list of exact rationals or Enclosures, or a built
    :class:`Sequence`, in which case the coordinates are enclosed from
    truncation level ``k`` (default K-1).  The argmin is the candidate
    with the smallest upper value; ties go to the smallest height, then
    lexicographically smallest (b_1, ..., b_n, b_0).
    """
    if Q < 1:
        raise InvalidArgument("Q must be at least 1")
    if isinstance(target, Sequence):
        k = target.K - 1 if k is None else k
        encl = [xi_enclosure(target, j, k) for j in range(1, target.n + 1)]
    else:
        encl = [x if isinstance(x, Enclosure) else Enclosure.point(Fraction(x)) for x in target]
    n = len(encl)
    if n < 1:
        raise InvalidArgument("empty target")
    required = (2 * Q + 1) ** n
    if required > budget:
        raise BudgetExceeded(required, budget)
    C, r, D2 = _integer_frame(encl)
    tasks = _tasks(n, Q)
    if workers <= 1:
        parts = [_scan((C, r, D2, Q, tasks))]
    else:
        jobs = [(C, r, D2, Q, chunk) for chunk in _chunks(tasks, 4 * workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan, jobs))
    best_vhi, best_key, low = _merge(parts)
    others = [vlo for vlo, key in low if key != best_key]
    ambiguous = bool(others) and others[0] < best_vhi
    value = Enclosure(Fraction(low[0][0], D2), Fraction(best_vhi, D2))
    argmin = (best_key[-1],) + best_key[1:-1]
    return PsiResult(Q, n, value, EXHAUSTIVE, argmin, ambiguous)


# ---------------------------------------------------------------------------
# Certified sandwich
# ---------------------------------------------------------------------------


def critical_block(seq: Sequence, Q: int) -> Optional[int]:
    """The block k with Q = a_{nk+1} - 1, when one exists in the certifiable range."""
    for k in range(1, seq.K):
        if seq.term(seq.n * k + 1) - 1 == Q:
            return k
    return None


def psi_star_enclosure(seq: Sequence, Q: int) -> PsiResult:
    w = build_witness(seq, Q)
    k = critical_block(seq, Q)
    if k is None:
        return PsiResult(Q, seq.n, Enclosure(Fraction(0), w.value.hi), WITNESS_ONLY, witness=w)
    cert = lower_bound_certificate(seq, k)
    return PsiResult(Q, seq.n, Enclosure(cert.lower, w.value.hi), WITNESS_PLUS_CERT, witness=w)
