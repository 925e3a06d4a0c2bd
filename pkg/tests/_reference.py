"""Naive full enumeration of psi*(Q) for exact rational targets.

Deliberately shares no code with the package: every (b_0, b_1, ..., b_n)
in a box is tried with Fraction arithmetic.  The argmin uses the same
ordering as the optimized search (height, then b_1..b_n, then b_0) over
forms whose first nonzero coefficient among b_1..b_n is positive.
"""

import math
from fractions import Fraction
from itertools import product


def reference_psi(xi, Q):
    xi = [Fraction(x) for x in xi]
    n = len(xi)
    b0_max = 1 + math.ceil(Q * sum(abs(x) for x in xi))
    best = None
    for tail in product(range(-Q, Q + 1), repeat=n):
        nonzero = [t for t in tail if t]
        if not nonzero or nonzero[0] < 0:
            continue
        lin = sum(b * x for b, x in zip(tail, xi))
        for b0 in range(-b0_max, b0_max + 1):
            val = abs(b0 + lin)
            key = (val, max(abs(t) for t in tail)) + tail + (b0,)
            if best is None or key < best:
                best = key
    return best[0], (best[-1],) + best[2:-1]
