"""The integer sequence a_1, a_2, ... and the truncated data of the vector it defines.

Coordinate j of the vector is the sum of 1/a_i over all i congruent to j
modulo n.  Only finitely many terms are ever built; every quantity that
involves the infinite tails is returned as an :class:`Enclosure` that is
valid for any continuation of the sequence with schedule exponents >= 2.

Indexing is 1-based throughout, with the convention a_0 = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational

from .errors import (
    ConstructionIntegrityError,
    DepthError,
    IndecisiveEnclosure,
    InvalidArgument,
    PreconditionViolation,
    RangeError,
)
from .numerics import Enclosure, parse_int, parse_rational, rational_str

SEQUENCE_FORMAT_VERSION = 1
MAX_PHI_PRECISION = 1 << 16


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Schedule:
    """Exponents M_k used in a_{nk+1} = a_{nk}^{M_k}, k >= 1.

    ``const`` gives M_k = m, ``ramp`` gives M_k = m0 + k, ``list`` gives
    explicit values M_1, M_2, ...
    """

    kind: str
    m: int = 0
    m0: int = 0
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("const", "ramp", "list"):
            raise InvalidArgument(f"unknown schedule kind {self.kind!r}")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __call__(self, k: int) -> int:
        if k < 1:
            raise InvalidArgument("schedule exponents start at k = 1")
        if self.kind == "const":
            return self.m
        if self.kind == "ramp":
            return self.m0 + k
        if k > len(self.values):
            raise DepthError(f"list schedule has {len(self.values)} entries, M_{k} requested")
        return self.values[k - 1]

    @classmethod
    def parse(cls, text: str) -> "Schedule":
        kind, _, rest = str(text).partition(":")
        kind = kind.strip()
        if kind == "const":
            return cls("const", m=parse_int(rest))
        if kind == "ramp":
            return cls("ramp", m0=parse_int(rest))
        if kind == "list":
            return cls("list", values=tuple(parse_int(v) for v in rest.split(",") if v.strip()))
        raise InvalidArgument(f"schedule must look like const:2, ramp:1 or list:2,3,4; got {text!r}")

    def to_json(self) -> dict:
        if self.kind == "const":
            return {"kind": "const", "m": self.m}
        if self.kind == "ramp":
            return {"kind": "ramp", "m0": self.m0}
        return {"kind": "list", "values": list(self.values)}

    @classmethod
    def from_json(cls, d: dict) -> "Schedule":
        kind = d.get("kind")
        if kind == "const":
            return cls("const", m=parse_int(d["m"]))
        if kind == "ramp":
            return cls("ramp", m0=parse_int(d["m0"]))
        if kind == "list":
            return cls("list", values=tuple(parse_int(v) for v in d["values"]))
        raise InvalidArgument(f"unknown schedule kind {kind!r}")


# ---------------------------------------------------------------------------
# Target functions for the generalized construction
# ---------------------------------------------------------------------------


def _sqrt_enclosure(t: int, prec: int) -> Enclosure:
    r = math.isqrt(t)
    if r * r == t:
        return Enclosure.point(r)
    r = math.isqrt(t << (2 * prec))
    return Enclosure(Fraction(r, 1 << prec), Fraction(r + 1, 1 << prec))


def _mpi_to_enclosure(x) -> Enclosure:
    a, b = x._mpi_
    return Enclosure(Fraction(*map(int, to_rational(a))), Fraction(*map(int, to_rational(b))))


@dataclass(frozen=True)
class PhiFamily:
    """A·t^(-s) (``power``) or A·t^(-s)·(log2 t)^(-r) (``powerlog``).

    ``s`` must be an integer or a half-integer.  Evaluation at an integer
    t returns an Enclosure whose width shrinks as ``prec`` grows; it is a
    single point whenever the value is rational and cheap to get exactly.
    """

    family: str
    A: Fraction
    s: Fraction
    r: Fraction = Fraction(0)

    def __post_init__(self):
        if self.family not in ("power", "powerlog"):
            raise InvalidArgument(f"unknown phi family {self.family!r}")
        for name in ("A", "s", "r"):
            object.__setattr__(self, name, parse_rational(getattr(self, name)))
        if self.A <= 0:
            raise InvalidArgument("phi coefficient A must be positive")
        if (2 * self.s).denominator != 1:
            raise InvalidArgument("phi exponent s must be an integer or half-integer")
        if self.family == "power" and self.r != 0:
            raise InvalidArgument("power family takes no log exponent")

    def _power_part(self, t: int, prec: int) -> Enclosure:
        s2 = int(2 * self.s)
        e = abs(s2)
        if e % 2 == 0:
            p = Enclosure.point(Fraction(t) ** (e // 2))
        else:
            p = _sqrt_enclosure(t, prec) * (t ** (e // 2))
        return p.reciprocal() if s2 > 0 else p

    def _log_part(self, t: int, prec: int) -> Enclosure:
        if self.r == 0:
            return Enclosure.point(1)
        if t & (t - 1) == 0 and self.r.denominator == 1:
            # log2 of a power of two is exact
            return Enclosure.point(Fraction(t.bit_length() - 1) ** (-int(self.r)))
        ctx = MPIntervalContext()  # private context: precision is per call, not global
        ctx.prec = prec
        lg = ctx.log(ctx.mpf(t)) / ctx.log(ctx.mpf(2))
        val = lg ** (-(ctx.mpf(self.r.numerator) / self.r.denominator))
        return _mpi_to_enclosure(val)

    def enclose(self, t: int, prec: int = 64) -> Enclosure:
        if t < 1 or (self.family == "powerlog" and t < 2):
            raise InvalidArgument(f"phi evaluated outside its domain at t={t}")
        return (self._power_part(t, prec) * self._log_part(t, prec)).scale(self.A)

    def is_exact(self) -> bool:
        return self.family == "power" and self.s.denominator == 1

    @classmethod
    def parse(cls, text: str) -> "PhiFamily":
        parts = [p.strip() for p in str(text).split(":")]
        if parts[0] == "power" and len(parts) == 3:
            return cls("power", parts[1], parts[2])
        if parts[0] == "powerlog" and len(parts) == 4:
            return cls("powerlog", parts[1], parts[2], parts[3])
        raise InvalidArgument(f"phi must look like power:A:s or powerlog:A:s:r; got {text!r}")

    def to_json(self) -> dict:
        d = {"family": self.family, "A": rational_str(self.A), "s": rational_str(self.s)}
        if self.family == "powerlog":
            d["r"] = rational_str(self.r)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "PhiFamily":
        return cls(d["family"], d["A"], d["s"], d.get("r", "0"))


def decide_less(f, rhs: Fraction, what: str, start: int = 64) -> bool:
    """Decide ``f(prec) < rhs`` exactly, refining ``prec`` until the enclosure clears ``rhs``."""
    prec = start
    while True:
        e = f(prec)
        if e.hi < rhs:
            return True
        if e.lo >= rhs:
            return False
        if e.is_point() or prec >= MAX_PHI_PRECISION:
            raise IndecisiveEnclosure(f"cannot decide {what} at {prec} bits")
        prec *= 2


# ---------------------------------------------------------------------------
# Parameters and sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Params:
    n: int
    c: Optional[Fraction]
    schedule: Schedule
    depth: int

    def __post_init__(self):
        if self.c is not None:
            object.__setattr__(self, "c", parse_rational(self.c))

    def validate(self, need_c: bool = True) -> None:
        if self.n < 2:
            raise InvalidArgument("dimension n must be at least 2")
        if self.depth < 1:
            raise InvalidArgument("depth K must be at least 1")
        if need_c:
            if self.c is None or not (0 < self.c < 1):
                raise InvalidArgument(
                    "c must lie strictly between 0 and 1; the endpoints 0 and 1 "
                    "are attained by singular and by almost all vectors and need no construction"
                )
        if self.schedule.kind == "list" and len(self.schedule.values) < self.depth:
            raise InvalidArgument(f"list schedule has {len(self.schedule.values)} entries, depth {self.depth} needs more")
        for k in range(1, self.depth + 1):
            if self.schedule(k) < 2:
                raise InvalidArgument(f"schedule exponent M_{k} = {self.schedule(k)} is below 2")


@dataclass(frozen=True)
class Sequence:
    params: Params
    a: tuple
    variant: str = "theorem1"
    phi: Optional[PhiFamily] = field(default=None)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def K(self) -> int:
        return self.params.depth

    @property
    def c(self) -> Optional[Fraction]:
        return self.params.c

    def __len__(self) -> int:
        return len(self.a)

    def term(self, i: int) -> int:
        if i == 0:
            return 1
        if not 1 <= i <= len(self.a):
            raise DepthError(f"a_{i} is not built (have a_1..a_{len(self.a)}); rebuild with a larger depth")
        return self.a[i - 1]

    def M(self, k: int) -> int:
        return self.params.schedule(k)

    def to_json(self) -> dict:
        d = {
            "version": SEQUENCE_FORMAT_VERSION,
            "variant": self.variant,
            "n": self.n,
            "c": rational_str(self.c) if self.c is not None else None,
            "schedule": self.params.schedule.to_json(),
        }
        if self.phi is not None:
            d["phi"] = self.phi.to_json()
        d["a"] = [str(x) for x in self.a]
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1) + "\n"

    @classmethod
    def from_json(cls, d: dict, strict: bool = True) -> "Sequence":
        """Load a sequence; with ``strict`` every invariant is re-checked.

        ``strict=False`` admits corrupted files so that the certificate
        layer can report exactly which check they fail.
        """
        try:
            if d.get("version") != SEQUENCE_FORMAT_VERSION:
                raise InvalidArgument(f"unsupported sequence format version {d.get('version')!r}")
            variant = d["variant"]
            if variant not in ("theorem1", "theorem2"):
                raise InvalidArgument(f"unknown variant {variant!r}")
            n = parse_int(d["n"])
            c = parse_rational(d["c"]) if d.get("c") is not None else None
            schedule = Schedule.from_json(d["schedule"])
            phi = PhiFamily.from_json(d["phi"]) if d.get("phi") is not None else None
            a = tuple(parse_int(x) for x in d["a"])
        except (KeyError, TypeError) as exc:
            raise InvalidArgument(f"malformed sequence file: {exc}") from exc
        if n < 2 or len(a) % n or len(a) < 2 * n:
            raise InvalidArgument(f"sequence length {len(a)} is not n·(K+1) with K >= 1 for n = {n}")
        params = Params(n, c, schedule, len(a) // n - 1)
        seq = cls(params, a, variant, phi)
        if strict:
            if variant == "theorem2" and phi is None:
                raise InvalidArgument("theorem2 sequence without phi")
            params.validate(need_c=variant == "theorem1")
            rebuilt = build_sequence(params) if variant == "theorem1" else build_sequence_phi(params, phi)
            if rebuilt.a != a:
                bad = next(i for i, (x, y) in enumerate(zip(a, rebuilt.a), 1) if x != y)
                raise ConstructionIntegrityError(f"a_{bad} does not follow the recursion")
        return seq

    @classmethod
    def loads(cls, text: str, strict: bool = True) -> "Sequence":
        return cls.from_json(json.loads(text), strict=strict)


def invariant_failures(seq: Sequence) -> list:
    """Names of violated structural invariants (empty when the sequence is sound)."""
    n, a = seq.n, seq.a
    bad = []
    for j in range(1, n + 1):
        if a[j - 1] != 8 * math.factorial(j):
            bad.append(f"initial term a_{j} != 8*{j}!")
    for i in range(1, len(a)):
        if a[i] % a[i - 1]:
            bad.append(f"a_{i} does not divide a_{i + 1}")
        if a[i] < 2 * a[i - 1]:
            bad.append(f"a_{i + 1} < 2*a_{i}")
    for k in range(1, seq.K + 1):
        base = seq.term(n * k + 1)
        for i in range(2, n):
            if seq.term(n * k + i) != base**i:
                bad.append(f"a_{n * k + i} != a_{n * k + 1}^{i}")
        top = seq.term(n * (k + 1))
        if top <= base**n:
            bad.append(f"a_{n * (k + 1)} <= a_{n * k + 1}^{n}")
        if seq.variant == "theorem1" and seq.c is not None:
            want = -((-base * seq.c.denominator) // seq.c.numerator) * seq.term(n * k + n - 1)
            if top != want:
                bad.append(f"a_{n * (k + 1)} != ceil(a_{n * k + 1}/c)*a_{n * k + n - 1}")
    return bad


def _assert_sound(seq: Sequence) -> Sequence:
    bad = invariant_failures(seq)
    if bad:
        raise ConstructionIntegrityError("; ".join(bad))
    return seq


def _initial_terms(n: int) -> list:
    return [8 * math.factorial(j) for j in range(1, n + 1)]


def ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


def build_sequence(params: Params) -> Sequence:
    params.validate(need_c=True)
    n, c = params.n, params.c
    a = _initial_terms(n)
    for k in range(1, params.depth + 1):
        base = a[-1] ** params.schedule(k)
        a.append(base)
        for i in range(2, n):
            a.append(base**i)
        # ceil(base / c) * a_{nk+n-1}
        a.append(ceil_div(base * c.denominator, c.numerator) * a[-1])
    return _assert_sound(Sequence(params, tuple(a), "theorem1"))


def minimal_block_factor(phi: PhiFamily, base: int, prev: int, n: int, k: int) -> int:
    """Smallest z with 1/(z·prev) < phi(base), after checking phi(base) < base^-n."""
    bound = Fraction(1, base**n)
    try:
        below = decide_less(lambda p: phi.enclose(base, p), bound, f"phi(a_{{n*{k}+1}}) < t^-n")
    except IndecisiveEnclosure as exc:
        raise IndecisiveEnclosure(f"block k={k}: {exc}") from exc
    if not below:
        raise PreconditionViolation(f"block k={k}: phi(t) >= t^-{n} at t = a_{n * k + 1}")
    prec = 64
    while True:
        e = phi.enclose(base, prec)
        if e.lo <= 0:
            raise IndecisiveEnclosure(f"block k={k}: phi enclosure touches 0")
        # z > 1/(prev*phi); the minimum is floor(1/(prev*phi)) + 1 once that floor is settled
        xl = Fraction(1) / (prev * e.hi)
        xh = Fraction(1) / (prev * e.lo)
        if math.floor(xl) == math.floor(xh):
            return math.floor(xl) + 1
        if prec >= MAX_PHI_PRECISION:
            raise IndecisiveEnclosure(f"block k={k}: phi enclosure too wide to fix the block factor")
        prec *= 2


def build_sequence_phi(params: Params, phi: PhiFamily) -> Sequence:
    params = Params(params.n, None, params.schedule, params.depth)
    params.validate(need_c=False)
    n = params.n
    a = _initial_terms(n)
    for k in range(1, params.depth + 1):
        base = a[-1] ** params.schedule(k)
        a.append(base)
        for i in range(2, n):
            a.append(base**i)
        prev = a[-1]
        a.append(minimal_block_factor(phi, base, prev, n, k) * prev)
    return _assert_sound(Sequence(params, tuple(a), "theorem2", phi))


# ---------------------------------------------------------------------------
# Partial sums and tails
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TruncVector:
    """Exact partial sums S_{j,k} = sum_{h<=k} 1/a_{nh+j}; S_{0,k} = 1."""

    seq: Sequence
    k: int
    S: tuple

    def __getitem__(self, j: int) -> Fraction:
        return self.S[j]


@lru_cache(maxsize=512)
def _partial_sums(seq: Sequence, k: int) -> tuple:
    n = seq.n
    out = [Fraction(1)]
    for j in range(1, n + 1):
        top = seq.term(n * k + j)
        out.append(Fraction(sum(top // seq.term(n * h + j) for h in range(k + 1)), top))
    return tuple(out)


def partial_sum(seq: Sequence, j: int, k: int) -> Fraction:
    """S_{j,k} for any k whose terms are built (no truncation-level restriction)."""
    return _partial_sums(seq, k)[j]


def partial_sums(seq: Sequence, k: int) -> TruncVector:
    if not 0 <= k <= seq.K - 1:
        raise RangeError(f"truncation level k={k} outside 0..{seq.K - 1}")
    return TruncVector(seq, k, _partial_sums(seq, k))


def _continuation_floor(seq: Sequence) -> int:
    # any unbuilt term is at least a_{N+1} = a_N^{M} >= a_N^2 (schedule exponents >= 2)
    return seq.a[-1] ** 2


def tail_enclosure(seq: Sequence, j: int, k: int, refined: bool = False) -> Enclosure:
    """Enclosure of R_{j,k} = sum_{h>k} 1/a_{nh+j}.

    The default is the dominance bound [1/f, 2/f] with f the first tail
    term.  ``refined`` keeps f exactly and bounds only the remainder by
    twice the reciprocal of the second tail term (or of the smallest
    value any unbuilt term can take).
    """
    if not 0 <= j <= seq.n:
        raise InvalidArgument(f"coordinate index j={j} outside 0..{seq.n}")
    if k < 0:
        raise RangeError("truncation level must be nonnegative")
    if j == 0:
        return Enclosure.point(0)
    n = seq.n
    first = n * (k + 1) + j
    if first > len(seq.a):
        raise DepthError(f"tail R_{{{j},{k}}} needs a_{first}; rebuild with depth >= {k + 1}")
    f = Fraction(1, seq.term(first))
    if not refined:
        return Enclosure(f, 2 * f)
    second = first + n
    rest = seq.term(second) if second <= len(seq.a) else _continuation_floor(seq)
    return Enclosure(f, f + Fraction(2, rest))


def xi_enclosure(seq: Sequence, j: int, k: int) -> Enclosure:
    return tail_enclosure(seq, j, k, refined=True) + partial_sums(seq, k)[j]


def load_sequence(path, strict: bool = True) -> Sequence:
    with open(path) as fh:
        return Sequence.loads(fh.read(), strict=strict)


def save_sequence(seq: Sequence, path) -> None:
    with open(path, "w") as fh:
        fh.write(seq.dumps())
