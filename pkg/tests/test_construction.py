import json
import math
from fractions import Fraction

import pytest

from conftest import make_phi_seq, make_seq
from dirichlet_spectrum import (
    Enclosure,
    Params,
    PhiFamily,
    Schedule,
    Sequence,
    build_sequence,
    partial_sums,
    tail_enclosure,
)
from dirichlet_spectrum.construction import partial_sum, xi_enclosure
from dirichlet_spectrum.errors import ConstructionIntegrityError, DepthError, InvalidArgument, RangeError


def test_golden_n2_depth2():
    seq = make_seq(depth=2)
    assert list(seq.a) == [8, 16, 256, 131072, 17179869184, 590295810358705651712]


def test_golden_n3_depth1():
    seq = make_seq(n=3, depth=1)
    assert list(seq.a) == [8, 16, 48, 2304, 5308416, 24461180928]
    assert seq.a[5] > seq.a[3] ** 3


def test_initial_block_n4():
    for c in (Fraction(1, 3), Fraction(9, 10)):
        seq = make_seq(n=4, c=c, depth=1)
        assert list(seq.a[:4]) == [8, 16, 48, 192]


def test_golden_exponents_depth3(seq2):
    assert [x.bit_length() - 1 for x in seq2.a] == [3, 4, 8, 17, 34, 69, 138, 277]
    assert all(x == 1 << (x.bit_length() - 1) for x in seq2.a)


def test_term_indexing(seq2):
    assert seq2.term(0) == 1
    assert seq2.term(3) == 256
    with pytest.raises(DepthError):
        seq2.term(9)


@pytest.mark.parametrize("c", ["0", "1", "3/2", "-1/2"])
def test_c_outside_unit_interval(c):
    with pytest.raises(InvalidArgument):
        build_sequence(Params(2, Fraction(c), Schedule.parse("const:2"), 2))


def test_schedule_below_two_rejected():
    with pytest.raises(InvalidArgument):
        build_sequence(Params(2, Fraction(1, 2), Schedule.parse("list:2,1"), 2))


def test_dimension_one_rejected():
    with pytest.raises(InvalidArgument):
        build_sequence(Params(1, Fraction(1, 2), Schedule.parse("const:2"), 2))


@pytest.mark.parametrize("text,values", [("const:3", [3, 3, 3]), ("ramp:1", [2, 3, 4]), ("list:2,5,7", [2, 5, 7])])
def test_schedule_parse(text, values):
    s = Schedule.parse(text)
    assert [s(k) for k in (1, 2, 3)] == values
    assert Schedule.from_json(s.to_json()) == s


def test_schedule_list_too_short():
    with pytest.raises(InvalidArgument):
        build_sequence(Params(2, Fraction(1, 2), Schedule.parse("list:2"), 3))


def test_phi_block_factor_half_t_squared():
    seq = make_phi_seq("power:1/2:2", depth=1)
    assert seq.a[3] == 256 * 513 == 131328


def test_phi_block_factor_t_cubed():
    seq = make_phi_seq("power:1:3", depth=1)
    assert seq.a[3] == 256 * 65537 == 16777472


def test_phi_block_factor_is_minimal():
    seq = make_phi_seq("power:1/2:2", depth=1)
    phi = PhiFamily.parse("power:1/2:2")
    z = seq.a[3] // seq.a[2]
    assert Fraction(1, z * 256) < phi.enclose(256).lo
    assert Fraction(1, (z - 1) * 256) >= phi.enclose(256).hi


def test_phi_half_integer_and_log_families():
    for text in ("power:1:5/2", "powerlog:1:2:1"):
        seq = make_phi_seq(text, depth=2)
        assert all(seq.a[i + 1] % seq.a[i] == 0 for i in range(len(seq.a) - 1))


def test_phi_enclosure_tightens_with_precision():
    phi = PhiFamily.parse("powerlog:1:2:1")
    coarse, fine = phi.enclose(1000, 64), phi.enclose(1000, 256)
    assert coarse.lo <= fine.lo <= fine.hi <= coarse.hi
    assert fine.width < coarse.width
    assert abs(float(fine.lo) - 1e-6 / math.log2(1000)) < 1e-20


def test_phi_decay_violation_refused():
    from dirichlet_spectrum.errors import PreconditionViolation
    with pytest.raises(PreconditionViolation):
        make_phi_seq("power:1:2", depth=1)


def test_partial_sum_example(seq2):
    assert partial_sums(seq2, 1)[1] == Fraction(33, 256)
    assert partial_sums(seq2, 1)[0] == 1


def test_partial_sums_range(seq2):
    with pytest.raises(RangeError):
        partial_sums(seq2, 3)


def test_tail_example(seq2):
    assert tail_enclosure(seq2, 1, 1) == Enclosure(Fraction(1, 17179869184), Fraction(2, 17179869184))


def test_refined_tail_inside_coarse(seq2):
    for j in (1, 2):
        for k in (0, 1, 2):
            coarse, fine = tail_enclosure(seq2, j, k), tail_enclosure(seq2, j, k, refined=True)
            assert coarse.lo == fine.lo and fine.hi <= coarse.hi


def test_tail_needs_built_term(seq2):
    with pytest.raises(DepthError):
        tail_enclosure(seq2, 1, 3)


def test_xi_enclosures_nest_with_depth(seq2_deep):
    for j in (1, 2):
        prev = xi_enclosure(seq2_deep, j, 0)
        for k in (1, 2, 3):
            cur = xi_enclosure(seq2_deep, j, k)
            assert prev.lo <= cur.lo and cur.hi <= prev.hi
            prev = cur


def test_json_round_trip_byte_identical(seq2):
    text = seq2.dumps()
    again = Sequence.loads(text)
    assert again == seq2
    assert again.dumps() == text
    d = json.loads(text)
    assert d["version"] == 1 and d["variant"] == "theorem1" and d["c"] == "1/2"
    assert d["schedule"] == {"kind": "const", "m": 2}
    assert all(isinstance(x, str) for x in d["a"])


def test_phi_json_round_trip():
    seq = make_phi_seq("powerlog:1:2:1", depth=2)
    text = seq.dumps()
    assert Sequence.loads(text).dumps() == text
    assert json.loads(text)["c"] is None


def _corrupt(seq, index, delta):
    d = json.loads(seq.dumps())
    d["a"][index - 1] = str(int(d["a"][index - 1]) + delta)
    return json.dumps(d)


def test_loader_rejects_corrupted_term(seq2):
    with pytest.raises(ConstructionIntegrityError):
        Sequence.loads(_corrupt(seq2, 4, 1))


def test_loader_rejects_malformed():
    with pytest.raises(InvalidArgument):
        Sequence.loads('{"version": 1, "variant": "theorem1"}')
    with pytest.raises(InvalidArgument):
        Sequence.loads('{"version": 2}')


def test_nonstrict_loader_admits_corruption(seq2):
    seq = Sequence.loads(_corrupt(seq2, 4, 1), strict=False)
    assert seq.a[3] == 131073


def test_reduced_denominators_match_terms(seq3):
    for k in range(seq3.K):
        for j in range(1, 4):
            S = partial_sum(seq3, j, k)
            assert S.denominator == seq3.term(3 * k + j)
            assert math.gcd(S.numerator, S.denominator) == 1
