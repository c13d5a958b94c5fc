"""Entanglement monotones built from the Lorentz singular values.

``M1 = max(0, -(s0 - s1 - s2))`` and ``M2 = max(0, -(s0 - s1 - s2 + s3))``
are monotones; ``M2 / 2`` is the concurrence.  Wootters' eigenvalues and the
negativity are computed independently for cross-checks.
"""
from dataclasses import asdict, dataclass

import numpy as np

from ._validation import RANK_TOL, STRUCT_TOL, check_density_matrix, check_party
from .decomposition import lsvd
from .exceptions import ValidationError
from .linalg import kron, partial_transpose, psd_sqrt
from .lorentz import ETA, random_lorentz_batch, rho_to_r
from .states import _rng, random_contraction

# s = H @ lambda, rows ordered as (s0, s1, s2, s3)
WOOTTERS_H = np.array([[1, 1, 1, 1],
                       [1, 1, -1, -1],
                       [1, -1, 1, -1],
                       [-1, 1, 1, -1]], dtype=float)

# diagonal pick matrices of the four variational functionals
PICKS = tuple(np.diag(d) for d in ([1., 0, 0, 0], [1., 1, 0, 0], [1., 1, 1, 0], [1., 1, 1, 1]))

_SYSY = kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class MonotoneReport:
    m1: float
    m2: float
    concurrence: float
    negativity: float
    wootters_lambda: tuple
    s: tuple
    relation_residual: float

    def to_dict(self):
        return asdict(self)


def check_spectrum(s, tol=RANK_TOL):
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.shape != (4,):
        raise ValidationError("a Lorentz spectrum has four entries")
    if not (s[0] >= s[1] - tol and s[1] >= s[2] - tol and s[2] >= abs(s[3]) - tol):
        raise ValidationError(f"spectrum {s} is not ordered as s0 >= s1 >= s2 >= |s3|")
    return s


def monotones_from_spectrum(s):
    """Return ``(m1, m2)`` for an ordered Lorentz spectrum.

    Examples
    --------
    >>> monotones_from_spectrum([1, 1, 1, -1])
    (1.0, 2.0)
    """
    s0, s1, s2, s3 = check_spectrum(s)
    m1 = max(0.0, -(s0 - s1 - s2))
    m2 = max(0.0, -(s0 - s1 - s2 + s3))
    return float(m1), float(m2)


def lorentz_spectrum(rho):
    """Lorentz singular values of a (normalized) two-qubit state."""
    rho = check_density_matrix(rho, normalize=True)
    return np.array(lsvd(rho_to_r(rho)).s)


def concurrence(rho):
    """Concurrence ``M2 / 2`` from the Lorentz spectrum."""
    return 0.5 * monotones_from_spectrum(lorentz_spectrum(rho))[1]


def wootters_lambda(rho):
    """Square roots of the eigenvalues of ``rho (sy x sy) rho^T (sy x sy)``, descending.

    Evaluated through the Hermitian form ``sqrt(rho) rho~ sqrt(rho)`` which has
    the same spectrum.
    """
    rho = check_density_matrix(rho, normalize=True)
    sq = psd_sqrt(rho)
    tilde = _SYSY @ rho.conj() @ _SYSY
    w = np.linalg.eigvalsh(sq @ tilde @ sq)
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def wootters_concurrence(rho):
    lam = wootters_lambda(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def wootters_relation_residual(rho):
    """``max |s - H lambda|`` over the four components."""
    return float(np.max(np.abs(lorentz_spectrum(rho) - WOOTTERS_H @ wootters_lambda(rho))))


def negativity(rho):
    """``max(0, -2 lambda_min(rho^{T_B}))``."""
    rho = check_density_matrix(rho, normalize=True)
    lmin = np.linalg.eigvalsh(partial_transpose(rho, 1))[0]
    return float(max(0.0, -2.0 * lmin))


def monotone_report(rho):
    rho = check_density_matrix(rho, normalize=True)
    s = lorentz_spectrum(rho)
    m1, m2 = monotones_from_spectrum(s)
    lam = wootters_lambda(rho)
    return MonotoneReport(
        m1=m1, m2=m2, concurrence=0.5 * m2, negativity=negativity(rho),
        wootters_lambda=tuple(float(x) for x in lam), s=tuple(float(x) for x in s),
        relation_residual=float(np.max(np.abs(s - WOOTTERS_H @ lam))))


# --- variational characterization ---------------------------------------------

def closed_form(s, functional):
    s = np.asarray(s, dtype=float)
    return float(np.trace(np.diag([1.0, -1.0, -1.0, 1.0]) @ np.diag(s) @ PICKS[functional - 1]))


def variational_optimizers(r):
    """Lorentz pair ``(L1', L2')`` attaining all four minima of the variational traces.

    ``L1' = diag(1, -1, -1, 1) L1^{-1}`` flips two spatial axes, which keeps it
    proper and orthochronous.
    """
    res = lsvd(r)
    flip = np.diag([1.0, -1.0, -1.0, 1.0])
    l1 = flip @ ETA @ res.l1.T @ ETA
    l2 = ETA @ res.l2.T @ ETA
    return l1, l2


def variational_trace(r, l1, l2, functional):
    return float(np.trace(l1 @ r @ l2.T @ PICKS[functional - 1]))


def variational_sweep(r, n_samples=500, seed=None, boost_cap=2.0, include_identity=True):
    """Sampled minima of all four variational traces over shared ``(L1, L2)`` draws.

    Returns
    -------
    sample_min, closed : ndarray, shape (4,)
    """
    r = np.asarray(r, dtype=float)
    rng = _rng(seed)
    l1 = random_lorentz_batch(n_samples, rng, boost_cap)
    l2 = random_lorentz_batch(n_samples, rng, boost_cap)
    if include_identity:
        l1 = np.concatenate([np.eye(4)[None], l1])
        l2 = np.concatenate([np.eye(4)[None], l2])
    prod = l1 @ r @ np.swapaxes(l2, 1, 2)
    diag = np.diagonal(prod, axis1=1, axis2=2)
    # the traces against diag(1,0,0,0) ... I are the cumulative sums of the diagonal
    mins = np.min(np.cumsum(diag, axis=1), axis=0)
    s = lsvd(r).s
    closed = np.array([closed_form(s, k) for k in (1, 2, 3, 4)])
    return mins, closed


def variational_sample(r, functional, n_samples=500, seed=None, boost_cap=2.0,
                       include_identity=True):
    """Sampled minimum of one variational trace against its closed form.

    Parameters
    ----------
    r : array_like, shape (4, 4)
    functional : {1, 2, 3, 4}
        Picks ``diag(1,0,0,0)``, ``diag(1,1,0,0)``, ``diag(1,1,1,0)`` or ``I``.
    n_samples : int
        Number of random ``(L1, L2)`` pairs.
    include_identity : bool
        Also evaluate ``(I, I)``.

    Returns
    -------
    sample_min, closed : float
    """
    if functional not in (1, 2, 3, 4):
        raise ValidationError("functional must be 1, 2, 3 or 4")
    mins, closed = variational_sweep(r, n_samples, seed, boost_cap, include_identity)
    return float(mins[functional - 1]), float(closed[functional - 1])


# --- monotonicity under local filtering ----------------------------------------

def _local(a, party):
    return np.kron(a, np.eye(2)) if party == 0 else np.kron(np.eye(2), a)


def local_povm_branch(rho, a, party=0, tol=1e-9):
    """Two-outcome local measurement ``{a, sqrt(I - a^dagger a)}`` on one party.

    Returns
    -------
    p_pass, rho_pass, p_fail, rho_fail
        Branch probabilities and normalized branch states.  A branch with
        zero probability returns ``None`` as its state.
    """
    rho = check_density_matrix(rho, normalize=True)
    party = check_party(party, 2)
    a = np.asarray(a, dtype=complex)
    if a.shape != (2, 2):
        raise ValidationError("filter must be 2x2")
    gram = a.conj().T @ a
    if np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))[-1] > 1.0 + tol:
        raise ValidationError("filter violates a^dagger a <= I")
    abar = psd_sqrt(np.eye(2) - gram)
    out = []
    for k in (a, abar):
        kk = _local(k, party)
        unnorm = kk @ rho @ kk.conj().T
        p = float(np.trace(unnorm).real)
        out.extend([p, unnorm / p if p > STRUCT_TOL else None])
    total = out[0] + out[2]
    out[0], out[2] = out[0] / total, out[2] / total
    return tuple(out)


def _m_values(rho):
    if rho is None:
        return np.zeros(2)
    return np.array(monotones_from_spectrum(lorentz_spectrum(rho)))


def monotone_mc_check(rho, n_trials=1000, seed=None):
    """Most negative ``M_i(rho) - sum_branch p M_i(branch)`` over random local POVMs.

    Both parties and both monotones are probed each trial; filters are
    ``U diag(s1, s2) V^dagger`` with Haar ``U, V`` and uniform ``s``.
    """
    rho = check_density_matrix(rho, normalize=True)
    rng = _rng(seed)
    base = _m_values(rho)
    worst = 0.0
    for _ in range(n_trials):
        for party in (0, 1):
            a = random_contraction(rng)
            p1, r1, p2, r2 = local_povm_branch(rho, a, party)
            after = p1 * _m_values(r1) + p2 * _m_values(r2)
            worst = min(worst, float(np.min(base - after)))
    return worst


def filter_covariance_residual(rho, a, party=0):
    """``|tr * M_i(branch) - det(a) M_i(rho)|`` for a filter with real positive determinant.

    Returns the larger residual over ``i = 1, 2``.
    """
    rho = check_density_matrix(rho, normalize=True)
    a = np.asarray(a, dtype=complex)
    det = np.linalg.det(a)
    if abs(det.imag) > 1e-12 * max(1.0, abs(det)) or det.real <= 0:
        raise ValidationError("identity is stated for filters with real positive determinant")
    kk = _local(a, party)
    unnorm = kk @ rho @ kk.conj().T
    t = float(np.trace(unnorm).real)
    lhs = t * _m_values(unnorm / t)
    return float(np.max(np.abs(lhs - det.real * _m_values(rho))))
