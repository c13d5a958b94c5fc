"""Named states and seeded random generators."""
import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from .exceptions import ValidationError
from .linalg import ket, pauli_basis, projector

SQRT2 = np.sqrt(2.0)

BELL = {
    # (|00> +- |11>)/sqrt2 and (|01> +- |10>)/sqrt2
    "psi+": (ket("00") + ket("11")) / SQRT2,
    "psi-": (ket("00") - ket("11")) / SQRT2,
    "phi+": (ket("01") + ket("10")) / SQRT2,
    "phi-": (ket("01") - ket("10")) / SQRT2,
}

GHZ = (ket("000") + ket("111")) / SQRT2
W = (ket("100") + ket("010") + ket("001")) / np.sqrt(3.0)


def bell_state(name="phi-"):
    return projector(BELL[name])


def werner(p):
    """Singlet mixed with white noise, ``p |singlet><singlet| + (1-p) I/4``."""
    return p * bell_state("phi-") + (1.0 - p) * np.eye(4) / 4.0


def bell_diagonal(weights):
    """Mixture of the four Bell states with weights for phi-, phi+, psi-, psi+."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (4,) or np.any(w < 0):
        raise ValidationError("bell_diagonal needs four non-negative weights")
    w = w / w.sum()
    names = ("phi-", "phi+", "psi-", "psi+")
    return sum(wk * bell_state(n) for wk, n in zip(w, names))


def quasi_distillable(weight=0.5):
    """``weight |phi+><phi+| + (1-weight) |00><00|``; weight 1/2 is the normal-form family member."""
    return weight * bell_state("phi+") + (1.0 - weight) * projector(ket("00"))


def generalized_ghz(p):
    return np.sqrt(p) * ket("000") + np.sqrt(1.0 - p) * ket("111")


def w_like(x, y, z):
    v = x * ket("100") + y * ket("010") + z * ket("001")
    return v / np.linalg.norm(v)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def haar_pure(n_qubits, seed=None):
    rng = _rng(seed)
    v = rng.normal(size=2 ** n_qubits) + 1j * rng.normal(size=2 ** n_qubits)
    return v / np.linalg.norm(v)


def wishart_state(seed=None, rank=4):
    """Random two-qubit state ``G G^dagger / tr`` with ``G`` a 4 x rank Ginibre matrix."""
    rng = _rng(seed)
    g = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(seed=None, dim=2):
    rng = _rng(seed)
    return unitary_group.rvs(dim, random_state=rng)


def random_sl2c(seed=None, scale=0.5):
    """Determinant-one 2x2 filter ``exp(sum_k c_k sigma_k)`` with complex Gaussian ``c``."""
    rng = _rng(seed)
    c = scale * (rng.normal(size=3) + 1j * rng.normal(size=3))
    _, x, y, z = pauli_basis()
    return expm(c[0] * x + c[1] * y + c[2] * z)


def random_contraction(seed=None):
    """Random ``U diag(s1, s2) V^dagger`` with Haar ``U, V`` and uniform singular values."""
    rng = _rng(seed)
    u = random_unitary(rng)
    v = random_unitary(rng)
    s = rng.uniform(0.0, 1.0, size=2)
    return u @ np.diag(s) @ v.conj().T


def random_w_class(seed=None, scale=0.5):
    rng = _rng(seed)
    mats = [random_sl2c(rng, scale) for _ in range(3)]
    v = np.kron(np.kron(mats[0], mats[1]), mats[2]) @ W
    return v / np.linalg.norm(v)


def random_ghz_class(seed=None):
    # Haar-random three-qubit states are GHZ class with probability one
    return haar_pure(3, seed)
