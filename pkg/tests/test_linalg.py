import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lorentzsvd.exceptions import NotAStateError, RankError, ValidationError
from lorentzsvd.linalg import (eig_hermitian, ket, partial_trace, partial_transpose,
                               pauli_basis, projector, purify_rank2)
from lorentzsvd.states import BELL, GHZ, W, bell_state, wishart_state


def test_pauli_basis():
    s = pauli_basis()
    assert np.allclose(s[0], np.eye(2))
    assert np.allclose(s[3], np.diag([1, -1]))
    gram = np.array([[np.trace(a @ b) for b in s] for a in s])
    assert np.allclose(gram, 2 * np.eye(4))


def test_partial_trace_ghz():
    assert np.allclose(partial_trace(GHZ, 2), 0.5 * np.diag([1, 0, 0, 1]))


def test_partial_trace_w():
    phi = (ket("01") + ket("10")) / np.sqrt(2)
    expected = 2 / 3 * projector(phi) + 1 / 3 * projector(ket("00"))
    assert np.allclose(partial_trace(W, 2), expected)


def test_partial_trace_product():
    assert np.allclose(partial_trace(ket("000"), 0), projector(ket("00")))


def test_partial_trace_rejects_bad_party():
    with pytest.raises(ValidationError):
        partial_trace(GHZ, 3)


def test_partial_transpose():
    d = np.diag([0.1, 0.2, 0.3, 0.4])
    assert np.allclose(partial_transpose(d), d)
    assert np.allclose(partial_transpose(np.eye(4) / 4), np.eye(4) / 4)
    w = np.linalg.eigvalsh(partial_transpose(bell_state("phi+")))
    assert np.allclose(w, [-0.5, 0.5, 0.5, 0.5])


def test_eig_hermitian_examples():
    w, v = eig_hermitian(np.diag([1.0, 3.0]))
    assert np.allclose(w, [3, 1])
    assert np.allclose(np.abs(v), [[0, 1], [1, 0]])
    w, v = eig_hermitian(np.array([[0, 1], [1, 0]]))
    assert np.allclose(w, [1, -1])
    assert np.allclose(np.abs(v), np.full((2, 2), 1 / np.sqrt(2)))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_eig_hermitian_reconstructs(seed):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = g + g.conj().T
    w, v = eig_hermitian(m)
    assert np.all(np.diff(w) <= 0)
    assert np.max(np.abs((v * w) @ v.conj().T - m)) <= 1e-9


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(ValidationError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def _retrace(psi):
    return partial_trace(psi, 2)


def test_purify_ghz_marginal():
    rho = 0.5 * np.diag([1.0, 0, 0, 1])
    psi = purify_rank2(rho)
    assert np.allclose(_retrace(psi), rho)
    # same Schmidt structure as GHZ: each one-party marginal is maximally mixed
    from lorentzsvd.linalg import single_marginal
    for k in range(3):
        assert np.allclose(single_marginal(psi, k), np.eye(2) / 2)


def test_purify_pure():
    psi = purify_rank2(projector(ket("00")))
    assert np.isclose(abs(psi[0]), 1.0)


def test_purify_bell_mixture():
    p = 0.7
    rho = p * projector(BELL["psi+"]) + (1 - p) * projector(BELL["psi-"])
    psi = purify_rank2(rho)
    assert np.allclose(_retrace(psi), rho)


def test_purify_rejects_rank3():
    with pytest.raises(RankError):
        purify_rank2(wishart_state(3, rank=3))


def test_density_validation():
    from lorentzsvd._validation import check_density_matrix
    with pytest.raises(NotAStateError):
        check_density_matrix(np.diag([1.5, -0.5, 0, 0]))
    with pytest.raises(ValidationError):
        check_density_matrix(np.ones((3, 3)))
