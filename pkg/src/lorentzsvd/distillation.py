"""Single-copy distillation of GHZ and W states from one three-qubit state.

The GHZ optimum rescales a base triple ``(A0, B0, C0)`` by
``diag(a, 1/a)``, ``diag(b, 1/b)`` and ``diag(1/ab, ab)``.  With the positive
parts ``H = A0 A0^dag`` etc. the extremality conditions say that
``beta_i / alpha_i`` is common to the three parties, where
``alpha = 2 |H12|`` and ``beta = H11 s^2 - H22 / s^2`` for the party's scale
``s``.  For a given common ratio every ``s^2`` is the positive root of a
quadratic, and ``ln s_a^2 + ln s_b^2 + ln s_c^2`` grows monotonically with
the ratio, so the solution is a bracketed one-dimensional root.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import rq
from scipy.optimize import brentq, minimize

from .exceptions import InternalInconsistency, ValidationError
from .linalg import det_normalize
from .states import _rng
from .tripartite import (FilterTriple, Slocc3Class, _require, branch_lambda_max,
                         branch_success_probability, ghz_filters, lambda_max_2x2,
                         three_tangle, w_filters, w_symmetry_family)

DEGENERATE_TOL = 1e-12


@dataclass(frozen=True)
class GhzDistillResult:
    filters: FilterTriple
    a_opt: float
    b_opt: float
    tau: float
    p_opt: float
    lambda_max: float
    ratio: float = None

    def to_dict(self):
        return {"filters": self.filters.to_dict(), "a_opt": self.a_opt, "b_opt": self.b_opt,
                "tau": self.tau, "p_opt": self.p_opt, "lambda_max": self.lambda_max,
                "ratio": self.ratio}


def positive_part(m):
    """``m m^dag`` rescaled to unit determinant."""
    h = m @ np.asarray(m).conj().T
    h = 0.5 * (h + h.conj().T)
    return h / np.sqrt(np.linalg.det(h).real)


def _alpha_beta(h, s2):
    return 2.0 * abs(h[0, 1]), h[0, 0].real * s2 - h[1, 1].real / s2


def ratio(h, s2):
    """``beta / alpha`` for positive part ``h`` at squared scale ``s2``."""
    alpha, beta = _alpha_beta(h, s2)
    return beta / alpha


def scale_for_ratio(h, r):
    """Positive ``s^2`` solving ``H11 s^2 - H22 / s^2 = r * 2|H12|``."""
    h11, h22 = h[0, 0].real, h[1, 1].real
    ra = r * 2.0 * abs(h[0, 1])
    # the larger root of h11 u^2 - ra u - h22 = 0, written without cancellation
    disc = np.sqrt(ra * ra + 4.0 * h11 * h22)
    if ra >= 0:
        return (ra + disc) / (2.0 * h11)
    return 2.0 * h22 / (disc - ra)


def _log_constraint(hs, r):
    return sum(np.log(scale_for_ratio(h, r)) for h in hs)


def _degenerate_scales(hs):
    """Optimal squared scales when every positive part is diagonal.

    Each factor then contributes ``exp|ln(s^2 H11)|``; the total exponent is
    at least ``|sum ln H11|`` and one party can carry all of it.
    """
    logs = np.array([np.log(h[0, 0].real) for h in hs])
    # s^2 = 1/H11 makes every factor the identity; undo the excess on party C
    s2 = np.exp(-logs)
    s2[2] = np.exp(logs[0] + logs[1])
    return s2


def optimal_ghz_distillation(psi):
    """Optimal one-branch filters for distilling GHZ from a GHZ-class state.

    Returns
    -------
    GhzDistillResult
        ``p_opt = sqrt(tau) / lambda_max`` for the optimally rescaled triple.
    """
    psi = _require(psi, Slocc3Class.GHZ_CLASS)
    base = ghz_filters(psi)
    hs = [positive_part(m) for m in base]
    # the base triple maps psi onto tau^(1/4) GHZ, so sqrt(tau) = ||F psi||^2
    tau = three_tangle(psi)
    active = [abs(h[0, 1]) > DEGENERATE_TOL * h[0, 0].real for h in hs]
    r = None
    if any(active):
        hact = [h for h, a in zip(hs, active) if a]
        # parties without coupling sit at their minimum, s^2 = sqrt(H22/H11)
        fixed = sum(np.log(np.sqrt(h[1, 1].real / h[0, 0].real))
                    for h, a in zip(hs, active) if not a)

        def g(rr):
            return _log_constraint(hact, rr) + fixed
        r = _bracket_root(g)
        s2 = np.array([scale_for_ratio(h, r) if a else np.sqrt(h[1, 1].real / h[0, 0].real)
                       for h, a in zip(hs, active)])
    else:
        s2 = _degenerate_scales(hs)
    a_opt, b_opt = float(np.sqrt(s2[0])), float(np.sqrt(s2[1]))
    filters = _rescaled(base, a_opt, b_opt)
    lam = branch_lambda_max(filters)
    p_opt = float(np.sqrt(tau) / lam)
    return GhzDistillResult(filters.with_probability(branch_success_probability(psi, filters)),
                            a_opt, b_opt, tau, p_opt, lam, r)


def _bracket_root(g):
    lo, hi = -1.0, 1.0
    while g(lo) > 0 and lo > -1e300:
        lo *= 2.0
    while g(hi) < 0 and hi < 1e300:
        hi *= 2.0
    if not g(lo) <= 0 <= g(hi):
        raise InternalInconsistency(f"ratio bracket failed: g({lo})={g(lo)}, g({hi})={g(hi)}")
    if g(lo) == 0:
        return lo
    if g(hi) == 0:
        return hi
    return brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


def _rescaled(base, a, b):
    return FilterTriple(np.diag([a, 1 / a]) @ base.a, np.diag([b, 1 / b]) @ base.b,
                        np.diag([1 / (a * b), a * b]) @ base.c)


def ratio_residual(psi, result):
    """Spread of ``beta_i / alpha_i`` over the parties with non-diagonal positive parts."""
    base = ghz_filters(psi)
    hs = [positive_part(m) for m in base]
    a, b = result.a_opt, result.b_opt
    s2 = [a * a, b * b, 1.0 / (a * b) ** 2]
    rs = [ratio(h, s) for h, s in zip(hs, s2) if abs(h[0, 1]) > DEGENERATE_TOL * h[0, 0].real]
    return float(max(rs) - min(rs)) if rs else 0.0


def ghz_grid_oracle(psi, n_grid=200, span=8.0):
    """Direct maximization of the branch probability over ``(ln a, ln b)``.

    Works on the full 8x8 operator with a dense eigen-solve, so it shares no
    algebra with :func:`optimal_ghz_distillation` beyond the base triple.

    Returns
    -------
    p_opt, a, b : float
    """
    psi = _require(psi, Slocc3Class.GHZ_CLASS)
    base = ghz_filters(psi)

    def neg_p(x):
        f = _rescaled(base, np.exp(x[0]), np.exp(x[1]))
        op = f.operator()
        lam = np.linalg.eigvalsh(op.conj().T @ op)[-1]
        v = op @ psi
        return -np.vdot(v, v).real / lam

    grid = np.linspace(-span, span, n_grid)
    u, w = np.meshgrid(grid, grid, indexing="ij")
    u, w = u.ravel(), w.ravel()
    ops = _batched_operator(base, np.exp(u), np.exp(w))
    lam = np.linalg.eigvalsh(np.conj(np.swapaxes(ops, 1, 2)) @ ops)[:, -1]
    v = ops @ psi
    vals = -np.sum(np.abs(v) ** 2, axis=1) / lam
    k = int(np.argmin(vals))
    best, x0 = float(vals[k]), (u[k], w[k])
    res = minimize(neg_p, x0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
    x = res.x if res.fun <= best else np.array(x0)
    return float(-min(res.fun, best)), float(np.exp(x[0])), float(np.exp(x[1]))


def _batched_operator(base, a, b):
    """``(D_a A0) (x) (D_b B0) (x) (D_1/ab C0)`` for arrays of scales, shape (n, 8, 8)."""
    def diag(x):
        d = np.zeros((x.size, 2, 2), dtype=complex)
        d[:, 0, 0], d[:, 1, 1] = x, 1.0 / x
        return d
    fa = diag(a) @ base.a
    fb = diag(b) @ base.b
    fc = diag(1.0 / (a * b)) @ base.c
    ab = np.einsum("nij,nkl->nikjl", fa, fb).reshape(-1, 4, 4)
    return np.einsum("nij,nkl->nikjl", ab, fc).reshape(-1, 8, 8)


def eigvec_formula_check(h, scale, tol=1e-12):
    """Residual of the closed-form top eigenvector of ``D h D``, ``D = diag(scale, 1/scale)``.

    The vector is ``(e^{i arg H12} alpha, -beta + sqrt(alpha^2 + beta^2))``.
    A degenerate spectrum returns 0; a diagonal ``h`` uses the matching basis
    vector.
    """
    h = np.asarray(h, dtype=complex)
    if scale <= 0:
        raise ValidationError("scale must be positive")
    d = np.diag([scale, 1.0 / scale])
    m = d @ h @ d
    lam = lambda_max_2x2(m)
    alpha, beta = _alpha_beta(h, scale * scale)
    if alpha <= tol * max(1.0, abs(beta)):
        if abs(beta) <= tol:
            return 0.0
        v = np.array([1.0, 0.0]) if beta > 0 else np.array([0.0, 1.0])
    else:
        phase = h[0, 1] / abs(h[0, 1])
        v = np.array([phase * alpha, -beta + np.hypot(alpha, beta)])
    return float(np.linalg.norm(m @ v - lam * v) / np.linalg.norm(v))


def random_det1_psd(seed=None, spread=1.0):
    rng = _rng(seed)
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    g = g * spread
    return positive_part(g)


# --- the curve pair behind uniqueness -----------------------------------------------

def curve_a(z, b):
    """``|a|`` on the first curve, ``|a|^4 = (z5 + z7/b^2) / (z4 + z2 b^2)``."""
    b2 = b * b
    return ((z[4] + z[6] / b2) / (z[3] + z[1] * b2)) ** 0.25


def curve_b(z, a):
    """``|b|`` on the second curve, ``|b|^4 = (z3 + z7/a^2) / (z6 + z2 a^2)``."""
    a2 = a * a
    return ((z[2] + z[6] / a2) / (z[5] + z[1] * a2)) ** 0.25


def crossing_function(z, t):
    """``ln b2(a1(e^t)) - t``; zeros are crossings of the two curves."""
    b = np.exp(t)
    return np.log(curve_b(z, curve_a(z, b))) - t


def count_crossings(z, t_max=40.0, n=8001):
    """Number of sign changes of :func:`crossing_function` on ``[-t_max, t_max]``.

    The indices follow the 1-based labels of the extremal equations, so ``z``
    needs eight entries of which ``z[1]`` through ``z[6]`` are used.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (8,) or np.any(z[1:7] <= 0):
        raise ValidationError("z needs eight entries with positive z2..z7")
    t = np.linspace(-t_max, t_max, n)
    f = crossing_function(z, t)
    s = np.sign(f)
    s = s[s != 0]
    return int(np.sum(s[1:] != s[:-1]))


def locate_crossing(z, t_max=40.0):
    """Crossing ``(|a|, |b|)`` of the two curves, found by bisection in ``ln b``."""
    z = np.asarray(z, dtype=float)
    t = brentq(lambda u: crossing_function(z, u), -t_max, t_max, xtol=1e-14)
    b = np.exp(t)
    return float(curve_a(z, b)), float(b)


# --- W distillation -------------------------------------------------------------------

def _unitary_party_params(base, party):
    """Family parameters ``(x, w)`` making factor ``party`` unitary.

    With ``base_j = R Q`` (RQ decomposition, ``R`` upper triangular) the
    stabilizer factor must equal ``R^{-1}`` up to a diagonal phase.
    """
    m = det_normalize(tuple(base)[party])
    r, _ = rq(m)
    r = r / np.sqrt(np.linalg.det(r))
    t = np.linalg.inv(r)
    return t[0, 0], t[0, 1]


def _family_member(base, party, x, w, free):
    """W family with factor ``party`` pinned by ``(x, w)`` and one free complex entry."""
    if party == 0:
        return w_symmetry_family(base, x, w, free)
    if party == 1:
        return w_symmetry_family(base, x, free, w)
    # party 2: -(y + z) = w
    return w_symmetry_family(base, x, free, -w - free)


def optimal_w_distillation(psi, n_starts=20, seed=0, tol=1e-9):
    """Best one-branch W distillation with one party restricted to a unitary.

    For each party in turn, the W stabilizer is used to make that party's
    filter unitary; the remaining complex parameter is optimized with
    Nelder-Mead from ``n_starts`` seeded starting points.

    Returns
    -------
    best : FilterTriple
        Highest-probability triple.
    per_party : list of float
        Best probability found with each party unitary.
    """
    psi = _require(psi, Slocc3Class.W_CLASS)
    base = w_filters(psi)
    rng = _rng(seed)
    best, best_p, per_party = None, -np.inf, []
    for party in range(3):
        x, w = _unitary_party_params(base, party)

        def neg_p(v):
            f = _family_member(base, party, x, w, v[0] + 1j * v[1])
            return -branch_success_probability(psi, f)
        party_best, party_x = np.inf, np.zeros(2)
        starts = [np.zeros(2)] + [rng.normal(scale=2.0, size=2) for _ in range(n_starts - 1)]
        for x0 in starts:
            res = minimize(neg_p, x0, method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": tol * 1e-3, "maxiter": 4000})
            if res.fun < party_best:
                party_best, party_x = res.fun, res.x
        per_party.append(-party_best)
        if -party_best > best_p:
            best_p = -party_best
            best = _family_member(base, party, x, w, party_x[0] + 1j * party_x[1])
    return best.with_probability(best_p), per_party
