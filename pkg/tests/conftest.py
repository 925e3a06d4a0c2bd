from fractions import Fraction

import pytest

from dirichlet_spectrum import Params, PhiFamily, Schedule, build_sequence, build_sequence_phi


def make_seq(n=2, c=Fraction(1, 2), schedule="const:2", depth=3):
    return build_sequence(Params(n, Fraction(c), Schedule.parse(schedule), depth))


def make_phi_seq(phi, n=2, schedule="const:2", depth=3):
    return build_sequence_phi(Params(n, None, Schedule.parse(schedule), depth), PhiFamily.parse(phi))


@pytest.fixture(scope="session")
def seq2():
    return make_seq()


@pytest.fixture(scope="session")
def seq2_deep():
    return make_seq(depth=4)


@pytest.fixture(scope="session")
def seq2_m3():
    return make_seq(schedule="const:3")


@pytest.fixture(scope="session")
def seq3():
    return make_seq(n=3)
