"""Input validation helpers and the package-wide tolerance constants."""
import numpy as np

from .exceptions import NotAStateError, ValidationError

# structural checks / rank decisions / iterative convergence
STRUCT_TOL = 1e-10
RANK_TOL = 1e-9
ITER_TOL = 1e-12


def as_complex_matrix(m, shape, name="matrix"):
    arr = np.asarray(m, dtype=complex)
    if arr.shape != shape:
        raise ValidationError(f"{name} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return arr


def check_hermitian(m, tol=STRUCT_TOL, name="matrix"):
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise ValidationError(f"{name} is not Hermitian (deviation {dev:.3e})")
    return m


def check_density_matrix(rho, tol=STRUCT_TOL, normalize=False):
    """Validate a two-qubit density matrix and return it as a complex array.

    Parameters
    ----------
    rho : array_like, shape (4, 4)
        Candidate density operator.
    tol : float
        Tolerance for the Hermiticity, trace and positivity checks.
    normalize : bool
        If True, rescale a positive trace to one instead of rejecting it.

    Returns
    -------
    ndarray of complex, shape (4, 4)
        The Hermitian part of ``rho`` (exactly Hermitian).
    """
    rho = as_complex_matrix(rho, (4, 4), "density matrix")
    check_hermitian(rho, tol, "density matrix")
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    if normalize:
        if tr <= tol:
            raise NotAStateError("density matrix has non-positive trace")
        rho = rho / tr
    elif abs(tr - 1.0) > tol:
        raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol * max(1.0, tr):
        raise NotAStateError(f"density matrix has negative eigenvalue {lam_min:.3e}")
    return rho


def check_pure3(psi, tol=STRUCT_TOL, normalize=False):
    """Validate an 8-amplitude three-qubit pure state."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (8,):
        raise ValidationError(f"three-qubit state needs 8 amplitudes, got {psi.size}")
    if not np.all(np.isfinite(psi)):
        raise ValidationError("state contains NaN or Inf amplitudes")
    nrm = np.vdot(psi, psi).real
    if normalize:
        if nrm <= tol:
            raise ValidationError("state vector is zero")
        return psi / np.sqrt(nrm)
    if abs(nrm - 1.0) > tol:
        raise ValidationError(f"state norm squared is {nrm!r}, expected 1")
    return psi


def check_filter(m, det_one=False, tol=1e-9):
    m = as_complex_matrix(m, (2, 2), "filter")
    if det_one and abs(np.linalg.det(m) - 1.0) > tol:
        raise ValidationError(f"filter determinant {np.linalg.det(m)!r} is not 1")
    return m


def check_party(party, n):
    if not isinstance(party, (int, np.integer)) or not 0 <= party < n:
        raise ValidationError(f"party index must be in 0..{n - 1}, got {party!r}")
    return int(party)
