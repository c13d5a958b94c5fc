"""Probabilistic SLOCC convertibility of two-qubit states.

Both states are reduced to their Bell-diagonal normal forms; conversion is
declared possible iff the target normal form is a mixture of the source
normal form with a separable Bell-diagonal state on the separable boundary.
This criterion is conjectural, and every verdict says so.
"""
from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations

import numpy as np

from ._validation import RANK_TOL, check_density_matrix
from .decomposition import NormalForm, lsvd
from .exceptions import NormalFormObstruction, ValidationError
from .lorentz import rho_to_r
from .monotones import WOOTTERS_H, concurrence
from .states import BELL, _rng, bell_diagonal, random_sl2c

H_INV = np.linalg.inv(WOOTTERS_H)
NEG_TOL = 1e-10
SUM_TOL = 1e-9
BOUNDARY_TOL = 1e-10
SEPARABLE_TOL = 1e-9
PROVENANCE = "conjecture"

# lexicographic order of the permutations of the last three components
PERMS = tuple(permutations(range(3)))


class Reason(str, Enum):
    TRIVIAL_SEPARABLE_TARGET = "TrivialSeparableTarget"
    PURE_ENTANGLED_SOURCE = "PureEntangledSource"
    MIXING_WITNESS = "MixingWitness"
    INFEASIBLE = "Infeasible"
    NORMAL_FORM_OBSTRUCTION = "NormalFormObstruction"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BellSpectrum:
    lam: tuple

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        if lam.shape != (4,):
            raise ValidationError("a Bell spectrum has four entries")
        if np.any(lam < -NEG_TOL) or abs(lam.sum() - 1.0) > NEG_TOL:
            raise ValidationError(f"{lam} is not a probability vector")
        if np.any(np.diff(lam) > NEG_TOL):
            raise ValidationError(f"{lam} is not descending")
        object.__setattr__(self, "lam", tuple(float(x) for x in lam))

    @property
    def entangled(self):
        return self.lam[0] > 0.5 + BOUNDARY_TOL

    @property
    def concurrence(self):
        return max(0.0, 2.0 * self.lam[0] - 1.0)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.lam, dtype=dtype)


@dataclass(frozen=True)
class ConvertVerdict:
    """Outcome of a convertibility query.

    ``witness`` is ``(perm, x, y, z, t)`` when a mixing solution was found;
    ``perm`` permutes the last three target eigenvalues.
    """
    feasible: bool
    reason: Reason
    witness: tuple = None
    provenance: str = field(default=PROVENANCE)

    def to_dict(self):
        w = None
        if self.witness is not None:
            perm, x, y, z, t = self.witness
            w = {"perm": list(perm), "x": x, "y": y, "z": z, "t": t}
        return {"feasible": self.feasible, "reason": str(self.reason),
                "witness": w, "provenance": self.provenance}


def as_spectrum(lam):
    if isinstance(lam, BellSpectrum):
        return lam
    lam = np.clip(np.sort(np.asarray(lam, dtype=float))[::-1], 0.0, None)
    return BellSpectrum(tuple(lam / lam.sum()))


def bell_spectrum(rho):
    """Eigenvalues of the Bell-diagonal SLOCC normal form of ``rho``, descending.

    Raises
    ------
    NormalFormObstruction
        If the state belongs to a non-diagonal family.
    """
    rho = check_density_matrix(rho, normalize=True)
    res = lsvd(rho_to_r(rho))
    if res.normal_form is not NormalForm.DIAGONAL:
        raise NormalFormObstruction(
            f"state has non-diagonal normal form {res.normal_form}; no Bell-diagonal reduction")
    lam = H_INV @ np.array(res.s)
    lam = np.clip(lam, 0.0, None)
    lam = np.sort(lam / lam.sum())[::-1]
    return BellSpectrum(tuple(lam))


def _mixing_rows(lam, mu, perm, x):
    """Return ``(y, z, t)`` solving the last three rows for a given ``x > 0``."""
    tail = np.asarray(mu[1:])[list(perm)]
    return (tail - (1.0 - x) * np.asarray(lam[1:])) / x


def solve_mixing_system(lam, mu):
    """Search ``diag(1, P3) mu = (1 - x) lam + x (1/2, y, z, t)`` for a solution.

    Parameters
    ----------
    lam, mu : BellSpectrum or array_like
        Source and target Bell spectra.

    Returns
    -------
    ConvertVerdict
    """
    lam, mu = as_spectrum(lam), as_spectrum(mu)
    l, m = np.array(lam.lam), np.array(mu.lam)
    if not lam.entangled:
        # a boundary or separable source acts like a separable state
        feasible = not mu.entangled
        return ConvertVerdict(feasible, Reason.TRIVIAL_SEPARABLE_TARGET if feasible
                              else Reason.INFEASIBLE)
    x = (l[0] - m[0]) / (l[0] - 0.5)
    if x < -NEG_TOL or x > 1.0 + NEG_TOL:
        return ConvertVerdict(False, Reason.INFEASIBLE)
    x = float(np.clip(x, 0.0, 1.0))
    for perm in PERMS:
        tail = m[1:][list(perm)]
        if x <= NEG_TOL:
            # no mixing: the target must already equal the source
            if np.max(np.abs(tail - l[1:])) <= SUM_TOL:
                return ConvertVerdict(True, Reason.MIXING_WITNESS, (perm, 0.0, 1 / 6, 1 / 6, 1 / 6))
            continue
        yzt = _mixing_rows(l, m, perm, x)
        if np.all(yzt >= -NEG_TOL) and abs(yzt.sum() - 0.5) <= SUM_TOL:
            y, z, t = (float(v) for v in yzt)
            return ConvertVerdict(True, Reason.MIXING_WITNESS, (perm, x, y, z, t))
    return ConvertVerdict(False, Reason.INFEASIBLE)


def _violation(l, m, xs):
    """Least violation of the constraint system at each mixing weight in ``xs``."""
    best = np.full(xs.shape, np.inf)
    first = np.abs(m[0] - (1 - xs) * l[0] - xs / 2)
    for perm in PERMS:
        tail = m[1:][list(perm)]
        # x * (y, z, t) = tail - (1 - x) lam_tail; negative parts are violations
        xyzt = tail[None, :] - (1 - xs)[:, None] * l[None, 1:]
        rows = np.max(np.clip(-xyzt, 0.0, None), axis=1)
        best = np.minimum(best, np.maximum(first, rows))
    return best


def grid_feasibility(lam, mu, step=1e-3, refine=True, tol=1e-9):
    """Brute-force feasibility on a grid of mixing weights.

    For each permutation and each ``x`` on ``[0, 1]`` with spacing ``step``
    the least violation of the constraint system is evaluated; ``y, z, t``
    are chosen row by row as the non-negative values closest to exact.
    Pairs whose coarse violation is within one grid step are ambiguous at
    that resolution and, with ``refine``, are resolved by successively finer
    grids around the best point.

    Returns
    -------
    feasible : bool
    violation : float
        Smallest violation found on the coarse grid.
    """
    lam, mu = as_spectrum(lam), as_spectrum(mu)
    l, m = np.array(lam.lam), np.array(mu.lam)
    if not lam.entangled:
        return (not mu.entangled), 0.0
    xs = np.arange(0.0, 1.0 + step / 2, step)
    viol = _violation(l, m, xs)
    coarse = float(np.min(viol))
    if not refine or coarse > step:
        return bool(coarse <= step), coarse
    h, fine = step, coarse
    while h > 1e-13 and fine > tol:
        center = xs[np.argmin(viol)]
        xs = np.clip(np.linspace(center - h, center + h, 201), 0.0, 1.0)
        viol = _violation(l, m, xs)
        fine = min(fine, float(np.min(viol)))
        h /= 100.0
    return bool(fine <= tol), coarse


def is_separable(rho, tol=SEPARABLE_TOL):
    return concurrence(rho) <= tol


def is_pure(rho, tol=RANK_TOL):
    w = np.linalg.eigvalsh(rho)
    return w[-2] <= tol


def convertible(rho1, rho2):
    """Decide whether ``rho1`` can be converted to ``rho2`` with non-zero probability.

    Raises
    ------
    NormalFormObstruction
        When a normal form needed for the decision is non-diagonal.
    """
    rho1 = check_density_matrix(rho1, normalize=True)
    rho2 = check_density_matrix(rho2, normalize=True)
    if is_separable(rho2):
        return ConvertVerdict(True, Reason.TRIVIAL_SEPARABLE_TARGET)
    if is_pure(rho1) and not is_separable(rho1):
        return ConvertVerdict(True, Reason.PURE_ENTANGLED_SOURCE)
    return solve_mixing_system(bell_spectrum(rho1), bell_spectrum(rho2))


def bell_weights(rho):
    """Bell-basis diagonal of ``rho``, i.e. the spectrum left after a Bell twirl, descending."""
    w = [float(np.real(v.conj() @ rho @ v)) for v in BELL.values()]
    return np.sort(np.clip(w, 0.0, None))[::-1] / sum(w)


def _separable_bell_weights(rng):
    # a Bell-diagonal state is separable iff every weight is at most 1/2
    while True:
        w = rng.dirichlet(np.ones(4))
        if w.max() <= 0.5:
            return w


def protocol_search(lam, mu, n_trials=2000, seed=None, filter_scale=1.0):
    """Random LOCC protocol search from a Bell-diagonal source toward a target.

    Each trial applies a random local filter pair to the source, twirls the
    outcome to Bell-diagonal form and mixes it with a random separable
    Bell-diagonal state.  Reaching an "infeasible" target would falsify the
    criterion; this is a heuristic probe, not a decision procedure.

    Returns
    -------
    distance : float
        Smallest max-norm distance between a reached spectrum and ``mu``.
    best : ndarray
        The closest spectrum reached.
    """
    lam, mu = as_spectrum(lam), as_spectrum(mu)
    m = np.array(mu.lam)
    rng = _rng(seed)
    rho = bell_diagonal(np.array(lam.lam)[::-1])
    best, dist = np.array(lam.lam), float(np.max(np.abs(np.array(lam.lam) - m)))
    for _ in range(n_trials):
        ab = np.kron(random_sl2c(rng, filter_scale * rng.uniform()),
                     random_sl2c(rng, filter_scale * rng.uniform()))
        out = ab @ rho @ ab.conj().T
        nu = bell_weights(out / np.trace(out).real)
        sep = _separable_bell_weights(rng)
        x = rng.uniform()
        reached = np.sort((1 - x) * nu + x * sep)[::-1]
        d = float(np.max(np.abs(reached - m)))
        if d < dist:
            dist, best = d, reached
    return dist, best
