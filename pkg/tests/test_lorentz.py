import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lorentzsvd.exceptions import NotAStateError
from lorentzsvd.linalg import ket, projector
from lorentzsvd.lorentz import (ETA, is_proper_orthochronous, lorentz_to_sl2c, r_to_rho,
                                random_lorentz, random_lorentz_batch, rho_to_r, sl2c_to_lorentz)
from lorentzsvd.states import BELL, bell_state, random_sl2c, wishart_state


def test_rho_to_r_bell():
    # the (|01> + |10>)/sqrt2 state has R = diag(1, 1, 1, -1)
    assert np.allclose(rho_to_r(bell_state("phi+")), np.diag([1, 1, 1, -1]))


def test_rho_to_r_mixed_and_product():
    assert np.allclose(rho_to_r(np.eye(4) / 4), np.diag([1, 0, 0, 0]))
    r = rho_to_r(projector(ket("00")))
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[0, 3] = expected[3, 0] = expected[3, 3] = 1
    assert np.allclose(r, expected)


def test_r_to_rho_examples():
    assert np.allclose(r_to_rho(np.diag([1.0, 1, 1, -1])), projector(BELL["phi+"]))
    assert np.allclose(r_to_rho(np.diag([1.0, 0, 0, 0])), np.eye(4) / 4)
    with pytest.raises(NotAStateError):
        r_to_rho(np.diag([1.0, 1, 1, 1]))


def test_r_round_trip(rng):
    rho = wishart_state(rng)
    assert np.allclose(r_to_rho(rho_to_r(rho)), rho)


def test_sl2c_identity_and_boost():
    assert np.allclose(sl2c_to_lorentz(np.eye(2)), np.eye(4))
    g = 2.0
    l = sl2c_to_lorentz(np.diag([g, 1 / g]))
    ch, sh = (g ** 2 + g ** -2) / 2, (g ** 2 - g ** -2) / 2
    expected = np.array([[ch, 0, 0, sh], [0, 1, 0, 0], [0, 0, 1, 0], [sh, 0, 0, ch]])
    assert np.allclose(l, expected)
    assert np.allclose(lorentz_to_sl2c(l), np.diag([g, 1 / g]))


def test_sl2c_rotation():
    th = 0.7
    a = np.diag([np.exp(-0.5j * th), np.exp(0.5j * th)])
    l = sl2c_to_lorentz(a)
    c, s = np.cos(th), np.sin(th)
    assert np.allclose(l[1:3, 1:3], [[c, -s], [s, c]]) or np.allclose(l[1:3, 1:3], [[c, s], [-s, c]])
    assert np.allclose(l[0], [1, 0, 0, 0]) and np.isclose(l[3, 3], 1)


def test_lorentz_to_sl2c_identity():
    assert np.allclose(lorentz_to_sl2c(np.eye(4)), np.eye(2))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_sl2c_round_trip(seed):
    a = random_sl2c(seed)
    l = sl2c_to_lorentz(a)
    assert is_proper_orthochronous(l)
    b = lorentz_to_sl2c(l)
    assert min(np.max(np.abs(b - a)), np.max(np.abs(b + a))) <= 1e-8


def test_filter_acts_as_lorentz(rng):
    rho = wishart_state(rng)
    a, b = random_sl2c(rng), random_sl2c(rng)
    ab = np.kron(a, b)
    lhs = rho_to_r(ab @ rho @ ab.conj().T)
    rhs = sl2c_to_lorentz(a) @ rho_to_r(rho) @ sl2c_to_lorentz(b).T
    assert np.allclose(lhs, rhs)


def test_random_lorentz():
    l = random_lorentz(3, boost_cap=0.0)
    assert np.isclose(l[0, 0], 1.0)
    assert np.allclose(random_lorentz(11), random_lorentz(11))
    for l in random_lorentz_batch(200, 5):
        assert np.max(np.abs(l.T @ ETA @ l - ETA)) < 1e-9
        assert is_proper_orthochronous(l)
