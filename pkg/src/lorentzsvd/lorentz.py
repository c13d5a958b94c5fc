"""R-picture of two-qubit states and the SL(2,C) / SO+(3,1) correspondence.

A two-qubit operator is written ``rho = 1/4 sum_ij R_ij sigma_i (x) sigma_j``.
Local determinant-one filters ``A (x) B`` act as ``R -> L_A R L_B^T`` with
``L_A`` a proper orthochronous Lorentz matrix.
"""
import numpy as np

from ._validation import STRUCT_TOL, as_complex_matrix, check_hermitian
from .exceptions import NotAStateError, ValidationError
from .linalg import pauli_basis

ETA = np.diag([1.0, -1.0, -1.0, -1.0])

_SIGMA = pauli_basis()
_SIGMA2 = [np.kron(a, b) for a in _SIGMA for b in _SIGMA]


def rho_to_r(rho, tol=1e-9):
    """Real 4x4 correlation matrix ``R_ij = tr(rho sigma_i (x) sigma_j)``.

    ``rho`` may be unnormalized; ``R[0, 0]`` is its trace.

    Raises
    ------
    ValidationError
        If an entry has an imaginary part above ``tol`` (non-Hermitian input).
    """
    rho = as_complex_matrix(rho, (4, 4), "rho")
    vals = np.array([np.trace(rho @ s) for s in _SIGMA2]).reshape(4, 4)
    if np.max(np.abs(vals.imag)) > tol:
        raise ValidationError("rho is not Hermitian: R has imaginary entries")
    return vals.real.copy()


def r_to_rho(r, tol=STRUCT_TOL, check_psd=True):
    """Inverse of :func:`rho_to_r`.

    Raises
    ------
    NotAStateError
        If the resulting operator has an eigenvalue below ``-tol * R00``.
    """
    r = np.asarray(r, dtype=float)
    if r.shape != (4, 4):
        raise ValidationError(f"R must be 4x4, got {r.shape}")
    rho = 0.25 * sum(r.flat[k] * _SIGMA2[k] for k in range(16))
    if check_psd:
        lam = np.linalg.eigvalsh(rho)[0]
        if lam < -tol * max(abs(r[0, 0]), 1.0):
            raise NotAStateError(f"R does not describe a positive operator (eigenvalue {lam:.3e})")
    return rho


def check_r_matrix(r, tol=1e-9):
    """Validate an R-picture matrix of a (possibly unnormalized) state."""
    r = np.asarray(r, dtype=float)
    if r.shape != (4, 4) or not np.all(np.isfinite(r)):
        raise ValidationError("R must be a finite real 4x4 matrix")
    r00 = r[0, 0]
    if r00 <= 0:
        raise ValidationError("R[0, 0] (the trace) must be positive")
    if np.max(np.abs(r)) > r00 * (1.0 + tol):
        raise ValidationError("R entries exceed the Pauli expectation bound |R_ij| <= R_00")
    return r


def lorentz_defect(l):
    """Return ``(metric deviation, det, l00)`` for a candidate Lorentz matrix."""
    l = np.asarray(l, dtype=float)
    return np.max(np.abs(l.T @ ETA @ l - ETA)), np.linalg.det(l), l[0, 0]


def is_proper_orthochronous(l, tol=1e-9):
    dev, det, l00 = lorentz_defect(l)
    return dev <= tol * max(1.0, l00 ** 2) and abs(det - 1.0) <= tol * max(1.0, l00 ** 4) \
        and l00 >= 1.0 - tol


def check_lorentz(l, tol=1e-9):
    l = np.asarray(l, dtype=float)
    if l.shape != (4, 4):
        raise ValidationError("Lorentz matrix must be 4x4")
    if not is_proper_orthochronous(l, tol):
        dev, det, l00 = lorentz_defect(l)
        raise ValidationError(
            f"not a proper orthochronous Lorentz matrix (metric dev {dev:.2e}, det {det:.6g}, L00 {l00:.6g})")
    return l


def sl2c_to_lorentz(a, tol=1e-9):
    """Lorentz matrix ``L_ij = 1/2 tr(sigma_i A sigma_j A^dagger)`` of a det-one filter."""
    a = as_complex_matrix(a, (2, 2), "filter")
    if abs(np.linalg.det(a) - 1.0) > tol:
        raise ValidationError(f"filter must have determinant 1, got {np.linalg.det(a)!r}")
    ad = a.conj().T
    return np.array([[0.5 * np.trace(si @ a @ sj @ ad).real for sj in _SIGMA] for si in _SIGMA])


def _canonical_sign(a):
    k = np.argmax(np.abs(a).ravel())
    return -a if a.ravel()[k].real < 0 else a


def lorentz_to_sl2c(l, tol=1e-9):
    """Det-one 2x2 filter ``A`` with ``sl2c_to_lorentz(A) == l``.

    ``A`` is fixed up to sign; the sign is chosen so that the entry of largest
    magnitude has non-negative real part.
    """
    l = check_lorentz(l, tol)
    # vec(A s A^dag) = (conj(A) kron A) vec(s); reshuffled, that is the rank-one vec(conj A) vec(A)^T
    k = sum(np.outer(sum(l[i, j] * _SIGMA[i] for i in range(4)).ravel(order="F"),
                     _SIGMA[j].ravel(order="F").conj()) for j in range(4)) / 2.0
    p = k.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    _, _, vh = np.linalg.svd(p)
    a = vh[0].reshape(2, 2)
    a = a / np.sqrt(np.linalg.det(a))
    return _canonical_sign(a)


def boost(rapidity, axis=3):
    """Pure boost along spatial axis 1, 2 or 3."""
    l = np.eye(4)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    l[0, 0] = l[axis, axis] = ch
    l[0, axis] = l[axis, 0] = sh
    return l


def boost_to(t):
    """Pure boost mapping ``e0`` to the future unit timelike vector ``t``."""
    t = np.asarray(t, dtype=float)
    gamma, p = t[0], t[1:]
    l = np.eye(4)
    l[0, 0] = gamma
    l[0, 1:] = l[1:, 0] = p
    pn2 = p @ p
    if pn2 > 0:
        l[1:, 1:] += np.outer(p, p) * (gamma - 1.0) / pn2
    return l


def rotation_to(n):
    """Proper 3x3 rotation taking the z axis to the unit vector ``n``."""
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    z = np.array([0.0, 0.0, 1.0])
    c = z @ n
    if c < -1.0 + 1e-15:
        return np.diag([1.0, -1.0, -1.0])
    v = np.cross(z, n)
    vx = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]])
    return np.eye(3) + vx + vx @ vx / (1.0 + c)


def spatial(rot):
    l = np.eye(4)
    l[1:, 1:] = rot
    return l


def null_frame(w):
    """Lorentz matrix mapping ``(1, 0, 0, 1)`` to the future null vector ``w``."""
    w = np.asarray(w, dtype=float)
    return spatial(rotation_to(w[1:])) @ boost(np.log(w[0]), 3)


def _euler_rotation(alpha, beta, gamma):
    def rz(t):
        c, s = np.cos(t), np.sin(t)
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])

    c, s = np.cos(beta), np.sin(beta)
    ry = np.array([[c, 0, s], [0, 1.0, 0], [-s, 0, c]])
    return rz(alpha) @ ry @ rz(gamma)


def random_lorentz(seed=None, boost_cap=2.0):
    """Random proper orthochronous Lorentz matrix ``diag(1,V) boost_x(alpha) diag(1,W)``.

    ``V`` and ``W`` use independent uniform Euler angles and the rapidity is
    uniform on ``[-boost_cap, boost_cap]``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if boost_cap < 0:
        raise ValidationError("boost_cap must be non-negative")
    v = _euler_rotation(*rng.uniform(0, 2 * np.pi, 3))
    w = _euler_rotation(*rng.uniform(0, 2 * np.pi, 3))
    alpha = rng.uniform(-boost_cap, boost_cap) if boost_cap > 0 else 0.0
    return spatial(v) @ boost(alpha, 1) @ spatial(w)


def _euler_batch(angles):
    a, b, g = angles.T
    ca, sa, cb, sb, cg, sg = np.cos(a), np.sin(a), np.cos(b), np.sin(b), np.cos(g), np.sin(g)
    # rz(a) @ ry(b) @ rz(g), written out
    rot = np.empty((len(a), 3, 3))
    rot[:, 0, 0] = ca * cb * cg - sa * sg
    rot[:, 0, 1] = -ca * cb * sg - sa * cg
    rot[:, 0, 2] = ca * sb
    rot[:, 1, 0] = sa * cb * cg + ca * sg
    rot[:, 1, 1] = -sa * cb * sg + ca * cg
    rot[:, 1, 2] = sa * sb
    rot[:, 2, 0] = -sb * cg
    rot[:, 2, 1] = sb * sg
    rot[:, 2, 2] = cb
    return rot


def random_lorentz_batch(n, seed=None, boost_cap=2.0):
    """``n`` draws from the :func:`random_lorentz` distribution, shape (n, 4, 4)."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if boost_cap < 0:
        raise ValidationError("boost_cap must be non-negative")
    v = _euler_batch(rng.uniform(0, 2 * np.pi, (n, 3)))
    w = _euler_batch(rng.uniform(0, 2 * np.pi, (n, 3)))
    alpha = rng.uniform(-boost_cap, boost_cap, n) if boost_cap > 0 else np.zeros(n)
    bx = np.tile(np.eye(4), (n, 1, 1))
    bx[:, 0, 0] = bx[:, 1, 1] = np.cosh(alpha)
    bx[:, 0, 1] = bx[:, 1, 0] = np.sinh(alpha)
    sv = np.tile(np.eye(4), (n, 1, 1))
    sw = sv.copy()
    sv[:, 1:, 1:], sw[:, 1:, 1:] = v, w
    return sv @ bx @ sw


def is_state_r(r, tol=STRUCT_TOL):
    try:
        r_to_rho(r, tol)
    except NotAStateError:
        return False
    return True


__all__ = [
    "ETA", "rho_to_r", "r_to_rho", "check_r_matrix", "sl2c_to_lorentz", "lorentz_to_sl2c",
    "random_lorentz", "random_lorentz_batch", "boost", "boost_to", "null_frame", "rotation_to", "spatial",
    "is_proper_orthochronous", "check_lorentz", "lorentz_defect", "check_hermitian",
]
