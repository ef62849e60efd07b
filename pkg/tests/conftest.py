from fractions import Fraction

import pytest

from openclosed import load_bundled, pipeline


@pytest.fixture(scope="session")
def c3():
    return pipeline(load_bundled("c3_f1"))


@pytest.fixture(scope="session")
def c3_half():
    return pipeline(load_bundled("c3_f1_2"))


@pytest.fixture(scope="session")
def kp2():
    return pipeline(load_bundled("kp2_f1"))


@pytest.fixture(scope="session")
def c3_rings(c3):
    from openclosed.batyrev import batyrev_pipeline
    fan3, fan4, ch = c3
    return batyrev_pipeline(ch, fan4, (), Fraction(1, 64))
