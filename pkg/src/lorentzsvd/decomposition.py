"""Lorentz singular value decomposition ``R = L1 Sigma L2^T`` of two-qubit states.

Generic states have a diagonal ``Sigma = diag(s0, s1, s2, s3)`` with
``s0 >= s1 >= s2 >= |s3|``.  The remaining orbits are reached only by
infinite boosts and are represented by the finite non-diagonal template::

    [[a, 0, 0, b        ],
     [0, d, 0, 0        ],
     [0, 0, d, 0        ],
     [c, 0, 0, b + c - a]]

in one of four families (quasi-distillable ``b = c = a/2`` and three
separable ones with ``d = 0``).
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._validation import ITER_TOL, RANK_TOL, check_density_matrix
from .exceptions import InternalInconsistency, SingularMarginalError
from .linalg import conjugate_local, psd_sqrt, reduce_two_qubit
from .lorentz import (ETA, boost_to, check_r_matrix, lorentz_to_sl2c, null_frame,
                      r_to_rho, rho_to_r, spatial)

CLUSTER_TOL = 1e-7
DEFECT_COND = 1e6
BOOST_CAP = 1e6
COINCIDE_TOL = 1e-6
KERNEL_GAP = 1e-4
KERNEL_RATIO = 1e3
CLASS_TOL = 1e-7


class NormalForm(str, Enum):
    DIAGONAL = "Diagonal"
    QUASI_DISTILLABLE = "QuasiDistillable"
    # (d = 0 = c, b = a): identity on the first qubit, projector on the second
    SEPARABLE_PROJECTOR_A = "SeparableProjectorA"
    # (d = 0 = b, c = a): projector on the first qubit, identity on the second
    SEPARABLE_PROJECTOR_B = "SeparableProjectorB"
    SEPARABLE_PURE = "SeparablePure"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class LsvdResult:
    """Outcome of :func:`lsvd`.

    Attributes
    ----------
    l1, l2 : ndarray, shape (4, 4)
        Proper orthochronous Lorentz matrices.
    sigma : ndarray, shape (4, 4)
        Normal form, diagonal for ``NormalForm.DIAGONAL``.
    s : tuple of float
        Lorentz singular values ``(s0, s1, s2, s3)``.
    normal_form : NormalForm
    abcd : tuple of float or None
        Template parameters for the non-diagonal families.
    residual : float
        ``max |l1 sigma l2^T - R|``.
    """
    l1: np.ndarray
    l2: np.ndarray
    sigma: np.ndarray
    s: tuple
    normal_form: NormalForm
    abcd: tuple = None
    residual: float = 0.0

    @property
    def is_diagonal(self):
        return self.normal_form is NormalForm.DIAGONAL

    def filters(self):
        """Det-one filters ``(A, B)`` with ``(A (x) B) rho (A (x) B)^dagger`` in normal form."""
        return (lorentz_to_sl2c(np.linalg.inv(self.l1)),
                lorentz_to_sl2c(np.linalg.inv(self.l2)))


def nondiagonal_template(a, b, c, d):
    return np.array([[a, 0, 0, b], [0, d, 0, 0], [0, 0, d, 0], [c, 0, 0, b + c - a]], dtype=float)


def nondiagonal_singular_values(a, b, c, d):
    s = np.sqrt(max((a - b) * (a - c), 0.0))
    return (s, s, d, -d)


def classify_normal_form(abcd, tol=CLASS_TOL):
    """Name the non-diagonal family that ``(a, b, c, d)`` belongs to.

    Raises
    ------
    InternalInconsistency
        If none of the four families matches within ``tol`` (relative to ``a``).
    """
    a, b, c, d = (float(x) for x in abcd)
    t = tol * max(abs(a), 1e-300)

    def close(x, y):
        return abs(x - y) <= t

    if close(b, a / 2) and close(c, a / 2):
        return NormalForm.QUASI_DISTILLABLE
    if close(d, 0):
        if close(a, b) and close(a, c):
            return NormalForm.SEPARABLE_PURE
        if close(c, 0) and close(b, a):
            return NormalForm.SEPARABLE_PROJECTOR_A
        if close(b, 0) and close(c, a):
            return NormalForm.SEPARABLE_PROJECTOR_B
    raise InternalInconsistency(f"(a, b, c, d) = {abcd} matches no normal-form family")


# --- Minkowski helpers -------------------------------------------------------

def _mdot(x, y):
    return x @ ETA @ y


def _minkowski_orthonormal(basis):
    """η-orthonormal basis of span(basis); returns (vectors as columns, signs)."""
    g = basis.T @ ETA @ basis
    w, q = np.linalg.eigh(0.5 * (g + g.T))
    order = np.argsort(-w)
    w, q = w[order], q[:, order]
    if np.any(np.abs(w) < 1e-14 * max(np.max(np.abs(w)), 1e-300)):
        raise InternalInconsistency("degenerate Minkowski metric on eigenspace")
    return basis @ q / np.sqrt(np.abs(w)), np.sign(w)


def _minkowski_gram_schmidt(cols):
    """Re-orthonormalize a nearly η-orthonormal frame, earlier columns first."""
    out = []
    for v in cols:
        v = np.array(v, dtype=float)
        for c in out:
            v = v - _mdot(v, c) / _mdot(c, c) * c
        n = _mdot(v, v)
        if abs(n) < 1e-12:
            raise InternalInconsistency("degenerate Lorentz frame")
        out.append(v / np.sqrt(abs(n)))
    return out


def _complete(cols, n_missing):
    """Append ``n_missing`` spacelike columns η-orthonormal to ``cols``."""
    cols = list(cols)
    for e in np.eye(4)[::-1]:
        if n_missing == 0:
            break
        v = e.copy()
        for c in cols:
            v = v - _mdot(v, c) / _mdot(c, c) * c
        n = _mdot(v, v)
        if n < -1e-8:
            cols.append(v / np.sqrt(-n))
            n_missing -= 1
    if n_missing:
        raise InternalInconsistency("could not complete Lorentz frame")
    return cols


def _span_real(vecs, k):
    """Real orthonormal basis (4 x k) of the span of possibly complex vectors."""
    stacked = np.hstack([vecs.real, vecs.imag])
    u, _, _ = np.linalg.svd(stacked)
    return u[:, :k]


# --- main entry --------------------------------------------------------------

def lsvd(r, cluster_tol=CLUSTER_TOL, defect_cond=DEFECT_COND, boost_cap=BOOST_CAP):
    """Lorentz singular value decomposition of an R-picture matrix.

    Parameters
    ----------
    r : array_like, shape (4, 4)
        ``R_ij = tr(rho sigma_i (x) sigma_j)``; ``rho`` need not be normalized.

    Returns
    -------
    LsvdResult
    """
    r = check_r_matrix(r)
    scale = r[0, 0]
    rn = r / scale
    sv = np.linalg.svd(rn, compute_uv=False)
    if sv[1] <= RANK_TOL * sv[0]:
        res = _rank_one(rn, boost_cap)
    else:
        m = rn @ ETA @ rn.T @ ETA
        res = _diagonalizable(rn, m, cluster_tol, defect_cond)
        if res is None:
            # the kernel test alone cannot tell a near-singular filter of a
            # diagonal-class state from a split Jordan pair; keep the better fit
            alt = _diagonalizable(rn, m, cluster_tol, defect_cond, kernel_check=False)
            try:
                res = _quasi_distillable(rn, m)
            except InternalInconsistency:
                if alt is None:
                    raise
                res = alt
            if alt is not None and _fit_error(rn, alt) < _fit_error(rn, res):
                res = alt
    l1, sigma, l2, s, nf, abcd = res
    sigma = sigma * scale
    s = tuple(float(x) * scale for x in s)
    if abcd is not None:
        abcd = tuple(float(x) * scale for x in abcd)
    residual = float(np.max(np.abs(l1 @ sigma @ l2.T - r)))
    return LsvdResult(l1, l2, sigma, s, nf, abcd, residual)


def _clusters(lam, gap):
    out, start = [], 0
    for k in range(1, len(lam) + 1):
        if k == len(lam) or lam[k - 1] - lam[k] >= gap:
            out.append(list(range(start, k)))
            start = k
    return out


def _fit_error(rn, res):
    l1, sigma, l2 = res[:3]
    lor = max(np.max(np.abs(l.T @ ETA @ l - ETA)) for l in (l1, l2))
    return max(float(np.max(np.abs(l1 @ sigma @ l2.T - rn))), float(lor))


def _diagonalizable(rn, m, cluster_tol, defect_cond, kernel_check=True):
    evals, evecs = np.linalg.eig(m)
    order = np.argsort(-evals.real)
    evals, evecs = evals[order], evecs[:, order]
    evecs = evecs / np.linalg.norm(evecs, axis=0)
    lam = evals.real
    mnorm = np.linalg.norm(m, 2)
    if np.linalg.norm(m - np.trace(m) / 4 * np.eye(4), 2) <= cluster_tol * mnorm:
        # scalar M (pure states): every frame diagonalizes it
        evecs = np.eye(4)
        lam = np.full(4, np.trace(m) / 4)
    else:
        # defectiveness: eigenvalue clusters with an ill-conditioned eigenvector basis.
        # Roundoff splits a Jordan pair by ~sqrt(eps), so the basis condition is
        # checked over the whole spectrum as well.
        for idx in _clusters(lam, cluster_tol * mnorm) + [list(range(4))]:
            if len(idx) > 1:
                cs = np.linalg.svd(evecs[:, idx], compute_uv=False)
                if cs[-1] < cs[0] / defect_cond:
                    return None
        # A cluster of k eigenvalues needs a k-dimensional eigenspace.  Roundoff
        # splits a Jordan pair by ~sqrt(eps), which can beat both tests above, but
        # then M - mean I keeps a singular value far above the cluster's spread.
        for idx in _clusters(lam, KERNEL_GAP * mnorm) if kernel_check else ():
            k = len(idx)
            if k > 1:
                ev = evals[idx]
                spread = np.max(np.abs(ev[:, None] - ev[None, :]))
                ns = np.linalg.svd(m - np.mean(lam[idx]) * np.eye(4), compute_uv=False)
                if ns[4 - k] > max(KERNEL_RATIO * spread, 1e-9 * mnorm):
                    return None
    # Degenerate pairs split by roundoff at the scale of |M|, while distinct
    # small eigenvalues can sit closer than that; try both clusterings.
    best, best_err = None, np.inf
    for gap in sorted({cluster_tol * mnorm, cluster_tol * max(np.max(np.abs(lam)), 1e-300)}):
        try:
            cand = _diagonal_frame(rn, m, lam, evecs, gap)
        except InternalInconsistency:
            continue
        if cand is not None and _fit_error(rn, cand) < best_err:
            best, best_err = cand, _fit_error(rn, cand)
    return best


def _diagonal_frame(rn, m, lam, evecs, gap):
    clusters = _clusters(lam, gap)
    timelike, spacelike = None, []
    for idx in clusters:
        k = len(idx)
        if k > 1 and k < 4:
            # eig returns ill-conditioned vectors inside a cluster; the null
            # space of M - mean I is the same subspace computed stably
            _, _, vt = np.linalg.svd(m - np.mean(lam[idx]) * np.eye(4))
            basis = vt[4 - k:].T
        else:
            basis = _span_real(evecs[:, idx], k)
        try:
            vecs, signs = _minkowski_orthonormal(basis)
        except InternalInconsistency:
            return None
        value = float(np.mean(lam[idx]))
        for j, sg in enumerate(signs):
            if sg > 0:
                if timelike is not None:
                    return None
                timelike = (value, vecs[:, j])
            else:
                spacelike.append((value, vecs[:, j]))
    if timelike is None or len(spacelike) != 3:
        return None
    spacelike.sort(key=lambda t: -t[0])
    t0 = timelike[1] if timelike[1][0] > 0 else -timelike[1]
    l1 = np.column_stack([t0] + [v for _, v in spacelike])
    if np.linalg.det(l1) < 0:
        l1[:, 3] = -l1[:, 3]
    s = np.sqrt(np.clip([timelike[0]] + [v for v, _ in spacelike], 0.0, None))
    if np.any(s[1:] > s[0] * (1 + 1e-6)):
        raise InternalInconsistency("timelike Lorentz singular value is not the largest")
    p = ETA @ l1.T @ ETA @ rn
    l2, s = _right_factor(p, s)
    sigma = np.diag(s)
    return l1, sigma, l2, tuple(s), NormalForm.DIAGONAL, None


def _right_factor(p, s):
    """Solve ``p = diag(s) L2^T`` for a proper orthochronous ``L2``.

    Rows belonging to vanishing singular values are completed; the sign of
    ``s3`` absorbs any orientation flip.
    """
    s = np.array(s, dtype=float)
    thresh = RANK_TOL * s[0]
    cols = [p[i] / s[i] for i in range(4) if s[i] > thresh]
    if len(cols) == 0 or not s[0] > thresh:
        raise InternalInconsistency("R has no timelike singular value")
    n_zero = 4 - len(cols)
    # rows with small s amplify roundoff; polish from the largest s down
    cols = _complete(_minkowski_gram_schmidt(cols), n_zero)
    l2 = np.column_stack(cols)
    s[s <= thresh] = 0.0
    if l2[0, 0] < 0:
        raise InternalInconsistency("right Lorentz factor is not orthochronous")
    if np.linalg.det(l2) < 0:
        l2[:, 3] = -l2[:, 3]
        s[3] = -s[3]
    return l2, s


def _rank_one(rn, boost_cap):
    u, sv, vt = np.linalg.svd(rn)
    u, v, sig = u[:, 0], vt[0], sv[0]
    if u[0] < 0:
        u, v = -u, -v
    mu, mv = _mdot(u, u), _mdot(v, v)

    def timelike(x, mx):
        return mx > 0 and x[0] / np.sqrt(mx) <= boost_cap

    n = np.array([1.0, 0.0, 0.0, 1.0])
    e0 = np.eye(4)[0]
    tu, tv = timelike(u, mu), timelike(v, mv)
    if tu and tv:
        l1, l2 = boost_to(u / np.sqrt(mu)), boost_to(v / np.sqrt(mv))
        s0 = sig * np.sqrt(mu * mv)
        return l1, np.diag([s0, 0, 0, 0]), l2, (s0, 0.0, 0.0, 0.0), NormalForm.DIAGONAL, None
    if tu:
        l1 = boost_to(u / np.sqrt(mu))
        l2 = null_frame(_null(v) * sig * np.sqrt(mu))
        sigma, abcd = np.outer(e0, n), (1.0, 1.0, 0.0, 0.0)
    elif tv:
        l2 = boost_to(v / np.sqrt(mv))
        l1 = null_frame(_null(u) * sig * np.sqrt(mv))
        sigma, abcd = np.outer(n, e0), (1.0, 0.0, 1.0, 0.0)
    else:
        l1 = null_frame(_null(u) * np.sqrt(sig))
        l2 = null_frame(_null(v) * np.sqrt(sig))
        sigma, abcd = np.outer(n, n), (1.0, 1.0, 1.0, 0.0)
    nf = classify_normal_form(abcd)
    return l1, sigma, l2, nondiagonal_singular_values(*abcd), nf, abcd


def _null(x):
    """Nearest future null vector with the same spatial direction."""
    sp = np.linalg.norm(x[1:])
    y = np.concatenate([[sp], x[1:]])
    # keep the time component's scale
    return y * (x[0] / sp)


def _quasi_distillable(rn, m):
    """Finite reduction of a Jordan-type ``R eta R^T eta`` to the b = c = a/2 template."""
    tr = np.trace(m)
    det_r = np.linalg.det(rn)
    disc = max(tr * tr / 16.0 + det_r, 0.0)
    s2 = tr / 4.0 + np.sqrt(disc)
    d2 = max(tr / 4.0 - np.sqrt(disc), 0.0)
    if s2 <= 0:
        raise InternalInconsistency("non-diagonalizable R with vanishing invariants")
    # d = s leaves M - (tr/4) I of rank one; the rank is far better conditioned
    # than the discriminant, whose roundoff enters through a square root
    n0 = np.linalg.svd(m - tr / 4.0 * np.eye(4), compute_uv=False)
    coincide = n0[1] <= COINCIDE_TOL * max(n0[0], abs(tr))
    if coincide:
        s2 = d2 = tr / 4.0
    s, d = np.sqrt(s2), np.sqrt(d2)
    nmat = m - s2 * np.eye(4)
    uu, sv, vt = np.linalg.svd(nmat)
    if coincide:
        p = uu[:, 0]
        kernel = vt[1:].T
    else:
        p = vt[3]
        kernel = vt[3:].T
    if p[0] < 0:
        p = -p
    # pseudo-inverse restricted to the known rank of N (1 or 3)
    rank = 1 if coincide else 3
    x = vt[:rank].T @ ((uu[:, :rank].T @ p) / sv[:rank])
    kappa = _mdot(p, x)
    if kappa <= 0:
        raise InternalInconsistency("Jordan chain of R eta R^T eta is not future directed")
    t = np.sqrt(8.0 * s2 / kappa)
    pp = p * t / (4.0 * s2)
    q = t * x
    # strip kernel components other than pp so that q is eta-orthogonal to them
    if coincide:
        proj = kernel - np.outer(p, p @ kernel)
        kb = np.linalg.svd(proj)[0][:, :2]
        g = kb.T @ ETA @ kb
        beta = np.linalg.solve(g, kb.T @ ETA @ q)
        q = q - kb @ beta
    q = q - _mdot(q, q) / (2.0 * _mdot(pp, q)) * pp
    if coincide:
        spc = kb
    else:
        a_mat = np.vstack([pp @ ETA, q @ ETA])
        spc = np.linalg.svd(a_mat)[2][2:].T
    vecs, signs = _minkowski_orthonormal(spc)
    if np.any(signs > 0):
        raise InternalInconsistency("transverse plane of the Jordan chain is not spacelike")
    l1 = np.column_stack([(pp + q) / 2, vecs[:, 0], vecs[:, 1], (pp - q) / 2])
    if np.linalg.det(l1) < 0:
        l1[:, 2] = -l1[:, 2]
    abcd = (2 * s, s, s, d)
    sigma = nondiagonal_template(*abcd)
    r1 = ETA @ l1.T @ ETA @ rn
    if d > RANK_TOL * s:
        l2 = np.linalg.solve(sigma, r1).T
    else:
        blk = np.linalg.inv(sigma[np.ix_([0, 3], [0, 3])]) @ r1[[0, 3]]
        cols = _complete([blk[0], blk[1]], 2)
        l2 = np.column_stack([cols[0], cols[2], cols[3], cols[1]])
        if np.linalg.det(l2) < 0:
            l2[:, 2] = -l2[:, 2]
    if l2[0, 0] < 0:
        raise InternalInconsistency("right Lorentz factor is not orthochronous")
    return l1, sigma, l2, nondiagonal_singular_values(*abcd), \
        classify_normal_form(abcd), abcd


def lsvd_state(rho):
    """:func:`lsvd` of a density matrix."""
    return lsvd(rho_to_r(rho))


def lorentz_singular_values(rho):
    return np.array(lsvd_state(rho).s)


# --- independent fixed-point oracle -----------------------------------------

@dataclass(frozen=True)
class FilteringResult:
    normal_rho: np.ndarray
    filters: tuple
    converged: bool
    n_iter: int
    scale: float

    @property
    def singular_values(self):
        """Lorentz singular values of the input implied by the normal form."""
        r = rho_to_r(self.normal_rho)
        t = np.diag(r)[1:]
        mags = np.sort(np.abs(t))[::-1]
        sign = np.sign(np.prod(t)) if np.all(t != 0) else 1.0
        return self.scale * np.array([r[0, 0], mags[0], mags[1], sign * mags[2]])


def _whitening(marg):
    w, v = np.linalg.eigh(0.5 * (marg + marg.conj().T))
    if w[0] <= 1e-14 * w[-1]:
        raise SingularMarginalError("local marginal is singular (product-projector structure)")
    f = (v / np.sqrt(w)) @ v.conj().T
    return f * np.sqrt(np.sqrt(w[0] * w[1]))


def filtering_normal_form_oracle(rho, max_iter=10000, tol=ITER_TOL):
    """Bring ``rho`` to Bell-diagonal form by alternately whitening the marginals.

    Each step applies the det-one filter proportional to ``rho_A^(-1/2)``
    (then the same on the second qubit) and renormalizes the trace.  After
    the marginals are maximally mixed, a local rotation diagonalizes the
    correlation block.

    Returns
    -------
    FilteringResult
        ``converged`` is False when ``max_iter`` steps did not make both
        marginals proportional to the identity within ``tol``; that is the
        signature of the non-diagonalizable orbits.

    Raises
    ------
    SingularMarginalError
        If a marginal is singular.
    """
    cur = check_density_matrix(rho, normalize=True)
    a_acc = np.eye(2, dtype=complex)
    b_acc = np.eye(2, dtype=complex)
    scale = 1.0
    half = np.eye(2) / 2
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        ra, rb = reduce_two_qubit(cur, 0), reduce_two_qubit(cur, 1)
        if max(np.max(np.abs(ra - half)), np.max(np.abs(rb - half))) <= tol:
            converged = True
            break
        fa = _whitening(ra)
        cur = conjugate_local(cur, fa, np.eye(2))
        t = np.trace(cur).real
        cur, scale, a_acc = cur / t, scale * t, fa @ a_acc
        fb = _whitening(reduce_two_qubit(cur, 1))
        cur = conjugate_local(cur, np.eye(2), fb)
        t = np.trace(cur).real
        cur, scale, b_acc = cur / t, scale * t, fb @ b_acc
    if converged:
        r = rho_to_r(cur)
        u, sv, vt = np.linalg.svd(r[1:, 1:])
        if np.linalg.det(u) < 0:
            u[:, 2] = -u[:, 2]
        if np.linalg.det(vt) < 0:
            vt[2] = -vt[2]
        ua = lorentz_to_sl2c(spatial(u.T))
        ub = lorentz_to_sl2c(spatial(vt))
        cur = conjugate_local(cur, ua, ub)
        cur = 0.5 * (cur + cur.conj().T)
        a_acc, b_acc = ua @ a_acc, ub @ b_acc
    return FilteringResult(cur, (a_acc, b_acc), converged, n_iter, scale)


__all__ = ["NormalForm", "LsvdResult", "lsvd", "lsvd_state", "lorentz_singular_values",
           "classify_normal_form", "nondiagonal_template", "nondiagonal_singular_values",
           "filtering_normal_form_oracle", "FilteringResult", "r_to_rho"]
