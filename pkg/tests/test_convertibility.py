import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lorentzsvd.convertibility import (BellSpectrum, Reason, bell_spectrum, bell_weights,
                                       convertible, grid_feasibility, protocol_search,
                                       solve_mixing_system)
from lorentzsvd.exceptions import NormalFormObstruction, ValidationError
from lorentzsvd.linalg import conjugate_local
from lorentzsvd.selftest import random_spectrum_pair
from lorentzsvd.states import (bell_diagonal, bell_state, quasi_distillable, random_sl2c, werner,
                               wishart_state)


def _check_witness(lam, mu, verdict):
    perm, x, y, z, t = verdict.witness
    target = np.r_[mu[0], np.asarray(mu[1:])[list(perm)]]
    mix = (1 - x) * np.asarray(lam) + x * np.array([0.5, y, z, t])
    assert np.max(np.abs(mix - target)) <= 1e-9
    assert min(y, z, t) >= -1e-10 and abs(y + z + t - 0.5) <= 1e-9


def test_bell_spectrum_examples():
    assert np.allclose(bell_spectrum(bell_state("phi-")).lam, [1, 0, 0, 0])
    p = 0.4
    assert np.allclose(bell_spectrum(werner(p)).lam, [(1 + 3 * p) / 4] + [(1 - p) / 4] * 3)
    with pytest.raises(NormalFormObstruction):
        bell_spectrum(quasi_distillable())


def test_bell_spectrum_is_filter_invariant(rng):
    rho = bell_diagonal([0.6, 0.2, 0.15, 0.05])
    out = conjugate_local(rho, random_sl2c(rng), random_sl2c(rng))
    assert np.allclose(bell_spectrum(out).lam, [0.6, 0.2, 0.15, 0.05], atol=1e-8)


def test_spectrum_validation():
    with pytest.raises(ValidationError):
        BellSpectrum((0.2, 0.3, 0.25, 0.25))
    with pytest.raises(ValidationError):
        BellSpectrum((0.5, 0.5, 0.5, -0.5))


def test_mixing_example_feasible():
    lam, mu = (1, 0, 0, 0), (0.6, 0.2, 0.1, 0.1)
    v = solve_mixing_system(lam, mu)
    assert v.feasible and v.reason is Reason.MIXING_WITNESS
    perm, x, y, z, t = v.witness
    assert perm == (0, 1, 2)
    assert np.allclose([x, y, z, t], [0.8, 0.25, 0.125, 0.125])
    _check_witness(lam, mu, v)


def test_mixing_example_infeasible():
    v = solve_mixing_system((0.6, 0.4, 0, 0), (0.9, 0.1, 0, 0))
    assert not v.feasible and v.reason is Reason.INFEASIBLE


def test_identity_conversion():
    lam = (0.7, 0.2, 0.06, 0.04)
    v = solve_mixing_system(lam, lam)
    assert v.feasible and v.witness[1] == 0.0


def test_convertible_examples():
    for p in (0.2, 0.5, 0.9):
        assert convertible(bell_state("phi-"), werner(p)).feasible
    v = convertible(werner(0.6), werner(0.9))
    assert not v.feasible and v.reason is Reason.INFEASIBLE
    v = convertible(wishart_state(4), np.eye(4) / 4)
    assert v.feasible and v.reason is Reason.TRIVIAL_SEPARABLE_TARGET
    assert v.provenance == "conjecture"


def test_pure_entangled_source():
    v = convertible(bell_state("psi+"), bell_diagonal([0.9, 0.05, 0.03, 0.02]))
    assert v.reason is Reason.PURE_ENTANGLED_SOURCE


def test_obstruction_surfaces():
    with pytest.raises(NormalFormObstruction):
        convertible(quasi_distillable(), werner(0.9))


def test_boundary_source_acts_separable():
    src = (0.5, 0.3, 0.1, 0.1)
    assert solve_mixing_system(src, (0.4, 0.3, 0.2, 0.1)).feasible
    assert not solve_mixing_system(src, (0.6, 0.2, 0.1, 0.1)).feasible


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_agrees_with_grid(seed):
    lam, mu = random_spectrum_pair(np.random.default_rng(seed))
    v = solve_mixing_system(lam, mu)
    assert v.feasible == grid_feasibility(lam, mu)[0]
    if v.feasible:
        _check_witness(lam, mu, v)
        # concurrence never increases
        assert BellSpectrum(mu).concurrence <= BellSpectrum(lam).concurrence + 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_reflexive(seed):
    rho = bell_diagonal(np.random.default_rng(seed).dirichlet(np.ones(4)))
    assert convertible(rho, rho).feasible


def _mix_toward_boundary(lam, rng):
    x = rng.uniform()
    sep = np.r_[0.5, rng.dirichlet(np.ones(3)) / 2]
    out = (1 - x) * np.asarray(lam) + x * np.r_[sep[0], rng.permutation(sep[1:])]
    return np.sort(out)[::-1]


def test_transitive():
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(1000):
        lam = np.sort(rng.dirichlet(np.ones(4)))[::-1]
        if lam[0] <= 0.55:
            continue
        mu = _mix_toward_boundary(lam, rng)
        nu = _mix_toward_boundary(mu, rng)
        if solve_mixing_system(lam, mu).feasible and solve_mixing_system(mu, nu).feasible:
            checked += 1
            assert solve_mixing_system(lam, nu).feasible
    assert checked > 100


def test_bell_weights_of_bell_diagonal():
    w = [0.1, 0.2, 0.3, 0.4]
    assert np.allclose(bell_weights(bell_diagonal(w)), sorted(w, reverse=True))


def test_protocol_search_does_not_beat_criterion():
    dist, best = protocol_search((0.7, 0.1, 0.1, 0.1), (0.925, 0.025, 0.025, 0.025), 500, 0)
    assert dist > 0.05
    assert best[0] <= 0.7 + 1e-9
    dist, _ = protocol_search((1, 0, 0, 0), (0.6, 0.2, 0.1, 0.1), 2000, 0)
    assert dist < 0.05
