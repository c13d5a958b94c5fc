"""SLOCC classes of three-qubit pure states and filters reaching GHZ or W.

The two-party marginal ``rho_AB`` of a genuinely tripartite state has rank
two.  Its Lorentz normal form is either Bell diagonal, whose purification is
GHZ-like, or the quasi-distillable form, whose purification is W-like.  The
filters that produce the normal form are read off the Lorentz decomposition
and completed on the third party.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._validation import check_pure3
from .decomposition import NormalForm, lsvd
from .exceptions import ClassError, InternalInconsistency, ValidationError
from .linalg import apply_local, det_normalize, kron, partial_trace, single_marginal
from .lorentz import rho_to_r
from .states import BELL, GHZ, W

TANGLE_TOL = 1e-9
MARGINAL_TOL = 1e-9
SQRT2 = np.sqrt(2.0)

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]])
_Z = np.diag([1.0 + 0j, -1.0])
_I = np.eye(2, dtype=complex)

# Bell kets written as (P (x) I)(|00> + |11>)/sqrt2, up to phase
_BELL_PAULI = {"psi+": _I, "psi-": _Z, "phi+": _X, "phi-": _X @ _Z}


class Slocc3Class(str, Enum):
    FULL_PRODUCT = "FullProduct"
    # named after the entangled pair; the third party factors out
    BISEPARABLE_AB = "BiseparableAB"
    BISEPARABLE_AC = "BiseparableAC"
    BISEPARABLE_BC = "BiseparableBC"
    W_CLASS = "Wclass"
    GHZ_CLASS = "GHZclass"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class FilterTriple:
    """Three local filters, one per qubit.

    ``success_probability`` is filled in when the triple was produced for a
    specific state (see :func:`branch_success_probability`).
    """
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    success_probability: float = None

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def apply(self, psi):
        return apply_local(psi, (self.a, self.b, self.c))

    def operator(self):
        return kron(self.a, self.b, self.c)

    def with_probability(self, p):
        return FilterTriple(self.a, self.b, self.c, float(p))

    def to_dict(self):
        return {"a": self.a, "b": self.b, "c": self.c,
                "success_probability": self.success_probability}


def as_triple(filters):
    if isinstance(filters, FilterTriple):
        return filters
    a, b, c = (np.asarray(m, dtype=complex) for m in filters)
    for m in (a, b, c):
        if m.shape != (2, 2):
            raise ValidationError("each filter must be 2x2")
    return FilterTriple(a, b, c)


# --- invariants and classification --------------------------------------------

def hyperdeterminant(psi):
    """Cayley hyperdeterminant of the 2x2x2 amplitude tensor."""
    a = np.asarray(psi, dtype=complex).reshape(2, 2, 2)
    d1 = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
          + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
          + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = (a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
          + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0])
    return d1 - 2.0 * d2 + 4.0 * d3


def three_tangle(psi):
    """``tau = 4 |Det psi|`` of a normalized three-qubit state, in ``[0, 1]``.

    Examples
    --------
    >>> round(three_tangle(GHZ), 12)
    1.0
    """
    psi = check_pure3(psi)
    return float(4.0 * abs(hyperdeterminant(psi)))


def marginal_ranks(psi, tol=MARGINAL_TOL):
    ranks = []
    for party in range(3):
        w = np.linalg.eigvalsh(single_marginal(psi, party))
        ranks.append(1 if w[0] <= tol else 2)
    return tuple(ranks)


def classify3(psi, tol=TANGLE_TOL):
    """SLOCC class of a three-qubit pure state."""
    psi = check_pure3(psi, normalize=True)
    ranks = marginal_ranks(psi)
    if sum(r == 1 for r in ranks) >= 2:
        return Slocc3Class.FULL_PRODUCT
    if ranks[0] == 1:
        return Slocc3Class.BISEPARABLE_BC
    if ranks[1] == 1:
        return Slocc3Class.BISEPARABLE_AC
    if ranks[2] == 1:
        return Slocc3Class.BISEPARABLE_AB
    return Slocc3Class.GHZ_CLASS if three_tangle(psi) > tol else Slocc3Class.W_CLASS


def _require(psi, cls):
    psi = check_pure3(psi, normalize=True)
    got = classify3(psi)
    if got is not cls:
        raise ClassError(f"state is {got}, operation needs {cls}")
    return psi


def image_residual(psi, filters, target):
    """``|| F psi / ||F psi|| - target ||`` after removing the global phase."""
    v = as_triple(filters).apply(psi)
    v = v / np.linalg.norm(v)
    t = np.asarray(target, dtype=complex) / np.linalg.norm(target)
    ov = np.vdot(t, v)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(v / phase - t))


# --- filters reaching the normal forms ------------------------------------------

def _ab_filters(psi):
    """Filters on parties A, B bringing ``rho_AB`` to its Lorentz normal form."""
    res = lsvd(rho_to_r(partial_trace(psi, 2)))
    a, b = res.filters()
    return res, a, b


def _gauge_fix_ghz(a, b, c):
    """Pick a representative of the GHZ stabilizer orbit of ``(a, b, c)``.

    The stabilizer is ``X (x) X (x) X`` together with
    ``diag(x, 1/x) (x) diag(y, 1/y) (x) diag(1/xy, xy)``.  The swap is used
    when it makes ``a`` diagonally dominant; ``x`` and ``y`` then make the
    diagonals of ``a`` and ``b`` equal.
    """
    if abs(a[0, 0]) + abs(a[1, 1]) < abs(a[0, 1]) + abs(a[1, 0]):
        a, b, c = _X @ a, _X @ b, _X @ c
    scales = []
    for m in (a, b):
        if abs(m[0, 0]) > 1e-12 and abs(m[1, 1]) > 1e-12:
            scales.append(np.sqrt(m[1, 1] / m[0, 0]))
        else:
            scales.append(1.0)
    x, y = scales
    a = np.diag([x, 1 / x]) @ a
    b = np.diag([y, 1 / y]) @ b
    c = np.diag([1 / (x * y), x * y]) @ c
    return a, b, c


def _gauge_fix_w(a, b, c):
    """Pick a representative of the W symmetry orbit of ``(a, b, c)``.

    ``x`` equalizes the diagonal of ``a``; ``y`` and ``z`` clear the upper
    off-diagonal entries of ``a`` and ``b`` where possible.
    """
    x = np.sqrt(a[1, 1] / a[0, 0]) if abs(a[0, 0]) > 1e-12 and abs(a[1, 1]) > 1e-12 else 1.0
    y = -x * a[0, 1] / a[1, 1] if abs(a[1, 1]) > 1e-12 else 0.0
    z = -x * b[0, 1] / b[1, 1] if abs(b[1, 1]) > 1e-12 else 0.0
    fam = w_symmetry_family(FilterTriple(a, b, c), x, y, z)
    return fam.a, fam.b, fam.c


def _finish(psi, a, b, c, gauge, target):
    a, b, c = (det_normalize(m) for m in (a, b, c))
    a, b, c = gauge(a, b, c)
    triple = FilterTriple(a, b, c)
    # local unitaries fixed by the gauge may flip the determinant sign
    triple = FilterTriple(*(det_normalize(m) for m in triple))
    return triple.with_probability(branch_success_probability(psi, triple))


def ghz_filters(psi):
    """Determinant-one filters mapping a GHZ-class state onto the GHZ direction.

    Raises
    ------
    ClassError
        If the state is not in the GHZ class.
    """
    psi = _require(psi, Slocc3Class.GHZ_CLASS)
    res, fa, fb = _ab_filters(psi)
    if res.normal_form is not NormalForm.DIAGONAL:
        raise InternalInconsistency(f"GHZ-class marginal has normal form {res.normal_form}")
    v = apply_local(psi, (fa, fb, _I)).reshape(4, 2)
    v = v / np.linalg.norm(v)
    # the two occupied Bell states of the Bell-diagonal marginal
    names = list(BELL)
    weights = [np.linalg.norm(BELL[n].conj() @ v) for n in names]
    top = sorted(range(4), key=lambda k: -weights[k])[:2]
    p1, p2 = (_BELL_PAULI[names[k]] for k in top)
    # P1^dag P2 is a Pauli up to phase; rotate it onto Z with V (x) V*
    pk = p1.conj().T @ p2
    sigma = max((_X, _Y, _Z), key=lambda m: abs(np.trace(m @ pk)))
    _, vecs = np.linalg.eigh(sigma)
    vmat = vecs[:, ::-1].conj().T
    ua, ub = vmat @ p1.conj().T, vmat.conj()
    fa, fb = ua @ fa, ub @ fb
    v = apply_local(psi, (fa, fb, _I)).reshape(4, 2)
    c = np.linalg.inv(np.column_stack([v[0], v[3]]))
    return _finish(psi, fa, fb, c, _gauge_fix_ghz, GHZ)


def w_filters(psi):
    """Determinant-one filters mapping a W-class state onto the W direction."""
    psi = _require(psi, Slocc3Class.W_CLASS)
    res, fa, fb = _ab_filters(psi)
    if res.normal_form is not NormalForm.QUASI_DISTILLABLE:
        raise InternalInconsistency(f"W-class marginal has normal form {res.normal_form}")
    v = apply_local(psi, (fa, fb, _I)).reshape(4, 2)
    # |00>|c00> + |phi+>|c_phi> ; W = |00>|1> + sqrt2 |phi+>|0>
    c00 = v[0]
    cphi = BELL["phi+"].conj() @ v
    c = np.linalg.inv(np.column_stack([cphi / SQRT2, c00]))
    return _finish(psi, fa, fb, c, _gauge_fix_w, W)


# --- symmetry families ----------------------------------------------------------

def ghz_symmetry_family(filters, a, b):
    """Left-multiply by ``diag(a, 1/a)``, ``diag(b, 1/b)``, ``diag(1/ab, ab)``."""
    f = as_triple(filters)
    if a == 0 or b == 0:
        raise ValidationError("family parameters a and b must be nonzero")
    return FilterTriple(np.diag([a, 1 / a]) @ f.a, np.diag([b, 1 / b]) @ f.b,
                        np.diag([1 / (a * b), a * b]) @ f.c)


def w_symmetry_family(filters, x, y, z):
    """Left-multiply by the upper-triangular W stabilizer triple.

    The factors are ``[[x, y], [0, 1/x]]``, ``[[x, z], [0, 1/x]]`` and
    ``[[x, -(y + z)], [0, 1/x]]``.
    """
    f = as_triple(filters)
    if x == 0:
        raise ValidationError("family parameter x must be nonzero")
    ta = np.array([[x, y], [0, 1 / x]], dtype=complex)
    tb = np.array([[x, z], [0, 1 / x]], dtype=complex)
    tc = np.array([[x, -(y + z)], [0, 1 / x]], dtype=complex)
    return FilterTriple(ta @ f.a, tb @ f.b, tc @ f.c)


# --- POVM bookkeeping ---------------------------------------------------------------

def lambda_max_2x2(h):
    """Largest eigenvalue of a 2x2 Hermitian PSD matrix."""
    h = np.asarray(h, dtype=complex)
    t = (h[0, 0] + h[1, 1]).real
    det = (h[0, 0] * h[1, 1] - abs(h[0, 1]) ** 2).real
    return 0.5 * (t + np.sqrt(max(t * t - 4 * det, 0.0)))


def branch_lambda_max(filters):
    """``lambda_max`` of ``A^dag A (x) B^dag B (x) C^dag C`` as a product of 2x2 values."""
    return float(np.prod([lambda_max_2x2(m.conj().T @ m) for m in as_triple(filters)]))


def branch_success_probability(psi, filters):
    """Probability of one filtering branch scaled to be a POVM element.

    The largest admissible weight is ``q^2 = 1 / lambda_max``; the returned
    value is ``q^2 || (A (x) B (x) C) psi ||^2``.
    """
    psi = check_pure3(psi, normalize=True)
    f = as_triple(filters)
    v = f.apply(psi)
    return float(np.vdot(v, v).real / branch_lambda_max(f))


def povm_feasible(branches, tol=1e-9):
    """Whether ``sum_i q_i^2 A_i^dag A_i (x) B_i^dag B_i (x) C_i^dag C_i <= I``."""
    total = np.zeros((8, 8), dtype=complex)
    for q, filters in branches:
        op = as_triple(filters).operator()
        total += (abs(q) ** 2) * (op.conj().T @ op)
    top = np.linalg.eigvalsh(0.5 * (total + total.conj().T))[-1]
    return bool(top <= 1.0 + tol)
