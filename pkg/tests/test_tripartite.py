import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lorentzsvd.exceptions import ClassError, ValidationError
from lorentzsvd.linalg import apply_local, kron, ket
from lorentzsvd.states import (BELL, GHZ, W, generalized_ghz, random_ghz_class, random_sl2c,
                               random_w_class, w_like)
from lorentzsvd.tripartite import (FilterTriple, Slocc3Class, branch_lambda_max,
                                   branch_success_probability, classify3, ghz_filters,
                                   ghz_symmetry_family, image_residual, lambda_max_2x2,
                                   povm_feasible, three_tangle, w_filters, w_symmetry_family)

I2 = np.eye(2)


def test_three_tangle_values():
    assert np.isclose(three_tangle(GHZ), 1.0)
    assert abs(three_tangle(W)) <= 1e-12
    assert np.isclose(three_tangle(generalized_ghz(0.25)), 0.75)


def test_generalized_ghz_grid():
    for p in np.linspace(0.01, 0.99, 20):
        assert abs(three_tangle(generalized_ghz(p)) - 4 * p * (1 - p)) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_tangle_covariance(seed):
    rng = np.random.default_rng(seed)
    psi = random_ghz_class(rng)
    mats = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)]
    v = apply_local(psi, mats)
    n = np.linalg.norm(v)
    lhs = three_tangle(v / n) * n ** 4
    rhs = three_tangle(psi) * np.prod([abs(np.linalg.det(m)) for m in mats]) ** 2
    assert abs(lhs - rhs) <= 1e-8 * max(1.0, rhs)


def test_classification_examples():
    assert classify3(ket("000")) is Slocc3Class.FULL_PRODUCT
    bell = (ket("00") + ket("11")) / np.sqrt(2)
    assert classify3(np.kron(ket("0"), bell)) is Slocc3Class.BISEPARABLE_BC
    assert classify3(np.kron(bell, ket("1"))) is Slocc3Class.BISEPARABLE_AB
    ac = (ket("000") + ket("101")) / np.sqrt(2)
    assert classify3(ac) is Slocc3Class.BISEPARABLE_AC
    assert classify3(W) is Slocc3Class.W_CLASS
    assert classify3(GHZ) is Slocc3Class.GHZ_CLASS


def test_classification_on_orbits(rng):
    for psi, cls in ((GHZ, Slocc3Class.GHZ_CLASS), (W, Slocc3Class.W_CLASS),
                     (np.kron(ket("0"), BELL["psi+"]), Slocc3Class.BISEPARABLE_BC),
                     (ket("010"), Slocc3Class.FULL_PRODUCT)):
        for _ in range(30):
            v = apply_local(psi, [random_sl2c(rng, 0.6) for _ in range(3)])
            assert classify3(v / np.linalg.norm(v)) is cls


def test_ghz_filters_examples():
    f = ghz_filters(GHZ)
    assert np.isclose(f.success_probability, 1.0)
    for m in f:
        assert np.allclose(np.abs(m), I2, atol=1e-9)
    psi = generalized_ghz(0.25)
    f = ghz_filters(psi)
    for m in f:
        assert abs(m[0, 1]) + abs(m[1, 0]) <= 1e-9
    assert image_residual(psi, f, GHZ) <= 1e-7


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_ghz_filters_random(seed):
    psi = random_ghz_class(seed)
    f = ghz_filters(psi)
    assert image_residual(psi, f, GHZ) <= 1e-7
    for m in f:
        assert np.isclose(np.linalg.det(m), 1.0)


def test_w_filters_examples():
    f = w_filters(W)
    assert np.isclose(f.success_probability, 1.0)
    for m in f:
        assert np.allclose(np.abs(m), I2, atol=1e-9)
    psi = w_like(0.8, 0.436, 0.412)
    f = w_filters(psi)
    assert image_residual(psi, f, W) <= 1e-7
    for m in f:
        assert abs(m[0, 1]) + abs(m[1, 0]) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_w_filters_random(seed):
    psi = random_w_class(seed)
    assert image_residual(psi, w_filters(psi), W) <= 1e-7


def test_wrong_class():
    with pytest.raises(ClassError):
        ghz_filters(W)
    with pytest.raises(ClassError):
        w_filters(GHZ)


def test_ghz_family_examples():
    f = ghz_filters(GHZ)
    same = ghz_symmetry_family(f, 1, 1)
    for m, n in zip(f, same):
        assert np.allclose(m, n)
    g = ghz_symmetry_family(FilterTriple(I2, I2, I2), 2, 1)
    assert np.allclose(g.a, np.diag([2, 0.5]))
    assert np.allclose(g.b, I2)
    assert np.allclose(g.c, np.diag([0.5, 2]))
    assert image_residual(GHZ, g, GHZ) <= 1e-12
    with pytest.raises(ValidationError):
        ghz_symmetry_family(f, 0, 1)


def test_w_family_examples():
    f = FilterTriple(I2, I2, I2)
    same = w_symmetry_family(f, 1, 0, 0)
    for m in same:
        assert np.allclose(m, I2)
    g = w_symmetry_family(f, 1, 1, -1)
    assert g.c[0, 1] == 0 and g.c[1, 0] == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_families_preserve_image(seed):
    rng = np.random.default_rng(seed)

    def cplx():
        return complex(rng.normal(), rng.normal())
    psi = random_ghz_class(rng)
    f = ghz_symmetry_family(ghz_filters(psi), cplx(), cplx())
    assert image_residual(psi, f, GHZ) <= 1e-8
    psi = random_w_class(rng)
    f = w_symmetry_family(w_filters(psi), cplx(), cplx(), cplx())
    assert image_residual(psi, f, W) <= 1e-8


def test_lambda_max_factorizes(rng):
    for _ in range(20):
        mats = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)]
        op = kron(*mats)
        full = np.linalg.eigvalsh(op.conj().T @ op)[-1]
        assert abs(full - branch_lambda_max(mats)) <= 1e-10 * full


def test_lambda_max_2x2():
    assert np.isclose(lambda_max_2x2(np.diag([3.0, 1.0])), 3.0)


def test_success_probability_bounds(rng):
    assert np.isclose(branch_success_probability(GHZ, (I2, I2, I2)), 1.0)
    for _ in range(20):
        psi = random_ghz_class(rng)
        mats = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)]
        p = branch_success_probability(psi, mats)
        assert 0 < p <= 1 + 1e-12


def test_scaled_ghz_branch_probability(rng):
    psi = random_ghz_class(rng)
    f = ghz_filters(psi)
    expected = np.sqrt(three_tangle(psi)) / branch_lambda_max(f)
    assert abs(branch_success_probability(psi, f) - expected) <= 1e-9


def _scaled(filters, lam):
    q = 1 / np.sqrt(lam)
    return [q, filters]


def test_povm_feasibility_probes(rng):
    mats = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3)]
    lam = branch_lambda_max(mats)
    q = 1 / np.sqrt(lam)
    assert povm_feasible([(q, mats)])
    assert not povm_feasible([(2 * q, mats)])
    assert povm_feasible([(q / np.sqrt(2), mats), (q / np.sqrt(2), mats)])
    eps = 1e-6
    assert povm_feasible([(q * np.sqrt(1 - eps), mats)], tol=1e-9)
    assert not povm_feasible([(q * np.sqrt(1 + eps), mats)], tol=1e-9)
