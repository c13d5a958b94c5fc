"""Small dense complex linear algebra and two/three-qubit primitives.

Qubit ordering: party 0 is the leftmost tensor factor, so the basis label
``b0 b1 b2`` of ``|b0 b1 b2>`` is read left to right and maps to the flat
index ``4*b0 + 2*b1 + b2``.
"""
from functools import reduce

import numpy as np

from ._validation import (RANK_TOL, STRUCT_TOL, check_density_matrix,
                          check_hermitian, check_party, check_pure3)
from .exceptions import RankError

_PAULI = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def pauli_basis():
    """Return ``[I, X, Y, Z]`` as fresh 2x2 complex arrays."""
    return [p.copy() for p in _PAULI]


def kron(*mats):
    return reduce(np.kron, mats)


def ket(label):
    """Computational basis ket from a bit string such as ``"010"``."""
    v = np.zeros(2 ** len(label), dtype=complex)
    v[int(label, 2)] = 1.0
    return v


def projector(v):
    v = np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def fix_phase(v):
    """Rotate the global phase of ``v`` so its largest-magnitude entry is real positive."""
    v = np.asarray(v, dtype=complex)
    k = np.argmax(np.abs(v))
    if abs(v[k]) == 0:
        return v
    return v * (abs(v[k]) / v[k])


def eig_hermitian(m, tol=1e-9):
    """Eigen-decomposition of a Hermitian matrix with descending eigenvalues.

    Eigenvector phases are fixed so the largest-magnitude component of each
    vector is real and positive.

    Returns
    -------
    evals : ndarray, shape (n,)
        Real eigenvalues, largest first.
    evecs : ndarray, shape (n, n)
        Orthonormal eigenvectors as columns.
    """
    m = check_hermitian(m, tol)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w, v = w[::-1], v[:, ::-1]
    v = np.column_stack([fix_phase(v[:, k]) for k in range(v.shape[1])])
    return w, v


def psd_sqrt(m):
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def partial_trace(psi, party):
    """Reduced two-qubit density matrix after tracing out one of three qubits.

    The two remaining parties keep their relative order.
    """
    psi = check_pure3(psi)
    party = check_party(party, 3)
    t = np.moveaxis(psi.reshape(2, 2, 2), party, -1).reshape(4, 2)
    return t @ t.conj().T


def single_marginal(psi, party):
    """One-qubit reduced state of party ``party`` of a three-qubit pure state."""
    psi = np.asarray(psi, dtype=complex).reshape(2, 2, 2)
    t = np.moveaxis(psi, party, 0).reshape(2, 4)
    return t @ t.conj().T


def reduce_two_qubit(rho, keep):
    """Marginal of a 4x4 operator on party ``keep`` (0 or 1)."""
    t = np.asarray(rho).reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def partial_transpose(rho, party=1):
    """Transpose the tensor factor ``party`` of a two-qubit operator."""
    party = check_party(party, 2)
    t = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if party == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4)


def purify_rank2(rho, tol=RANK_TOL):
    """Purify a rank-2 (or rank-1) two-qubit state with a single extra qubit.

    The result is ``sum_k sqrt(lam_k) |e_k> (x) |k>`` over the two largest
    eigenpairs, with the purifying qubit as party 2.

    Raises
    ------
    RankError
        If the third eigenvalue exceeds ``tol``.
    """
    rho = check_density_matrix(rho, STRUCT_TOL)
    w, v = eig_hermitian(rho)
    if w[2] > tol:
        raise RankError(f"state has rank > 2 (third eigenvalue {w[2]:.3e})")
    psi = np.zeros((4, 2), dtype=complex)
    for k in range(2):
        psi[:, k] = np.sqrt(max(w[k], 0.0)) * v[:, k]
    psi = psi.reshape(8)
    return psi / np.linalg.norm(psi)


def apply_local(psi, mats):
    """Apply one 2x2 operator per party to a multi-qubit state vector."""
    return kron(*mats) @ np.asarray(psi, dtype=complex).reshape(-1)


def conjugate_local(rho, a, b):
    """Return ``(a (x) b) rho (a (x) b)^dagger`` without renormalizing."""
    ab = np.kron(a, b)
    return ab @ rho @ ab.conj().T


def det_normalize(m):
    """Scale a 2x2 matrix to unit determinant (principal square root)."""
    m = np.asarray(m, dtype=complex)
    return m / np.sqrt(np.linalg.det(m))
