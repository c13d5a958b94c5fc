"""Property suites behind ``lorentzsvd selftest``.

Every suite draws its trials from ``SeedSequence(seed).spawn(n)`` so a trial
can be replayed alone, and returns a :class:`SuiteResult` whose
``counterexample`` holds the first offending input.
"""
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ValidationError
from .io import StateFile
from .convertibility import grid_feasibility, solve_mixing_system
from .decomposition import NormalForm, lsvd
from .distillation import ghz_grid_oracle, optimal_ghz_distillation, ratio_residual
from .linalg import conjugate_local
from .lorentz import lorentz_defect, rho_to_r
from .monotones import monotone_mc_check, variational_optimizers, variational_sweep, \
    variational_trace
from .states import (W, bell_diagonal, random_ghz_class, random_sl2c, random_w_class, wishart_state)
from .tripartite import (GHZ, Slocc3Class, classify3, ghz_filters, image_residual, w_filters)

SUITES = ("lsvd", "variational", "monotone", "convert", "tripartite", "appendix")


@dataclass
class SuiteResult:
    suite: str
    n: int
    tol: float
    worst: float = 0.0
    failures: int = 0
    details: dict = field(default_factory=dict)
    counterexample: object = None
    counterexample_meta: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.failures == 0

    def record(self, value, bad, example=None, trial=None, **meta):
        self.worst = max(self.worst, float(value))
        if bad:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = example
                self.counterexample_meta = {"trial": trial, **meta}

    def to_dict(self):
        return {"suite": self.suite, "n": self.n, "tol": self.tol, "worst": self.worst,
                "failures": self.failures, "passed": self.passed, "details": self.details}

    def counterexample_file(self, seed=None):
        """:class:`StateFile` holding the first failing input, or ``None``."""
        if self.counterexample is None:
            return None
        x = np.asarray(self.counterexample)
        kind = "pure3q" if x.shape == (8,) else "density2q"
        meta = {"suite": self.suite, "seed": seed, **self.counterexample_meta}
        return StateFile(kind, x, meta)


def trial_rngs(seed, n):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def random_spectrum_pair(rng):
    """Entangled source spectrum and a target that is feasible about half the time."""
    lam = np.sort(rng.dirichlet(np.ones(4)))[::-1]
    if lam[0] <= 0.5:
        lam = np.sort(np.r_[0.5 + lam[0] / 2, lam[1:] / 2])[::-1]
    if rng.uniform() < 0.5:
        x = rng.uniform()
        sep = np.r_[0.5, rng.dirichlet(np.ones(3)) / 2]
        mu = (1 - x) * lam + x * np.r_[sep[0], rng.permutation(sep[1:])]
    else:
        mu = rng.dirichlet(np.ones(4))
    return lam, np.sort(mu)[::-1] / mu.sum()


def suite_lsvd(seed=1, n=1000, tol=1e-8):
    """Reconstruction, ordering, Lorentz membership and filter invariance."""
    res = SuiteResult("lsvd", n, tol)
    slocc = 0.0
    for i, rng in enumerate(trial_rngs(seed, n)):
        rho = wishart_state(rng)
        out = lsvd(rho_to_r(rho))
        s = np.array(out.s)
        order = max(s[1] - s[0], s[2] - s[1], abs(s[3]) - s[2], 0.0)
        lor = max(max(lorentz_defect(l)[0], abs(lorentz_defect(l)[1] - 1.0),
                      max(0.0, 1.0 - l[0, 0])) for l in (out.l1, out.l2))
        a, b = random_sl2c(rng), random_sl2c(rng)
        rho2 = conjugate_local(rho, a, b)
        s2 = np.array(lsvd(rho_to_r(rho2)).s)
        dev = np.max(np.abs(s2 - s))
        slocc = max(slocc, dev)
        bad = (out.residual > tol or order > 1e-9 or lor > 1e-9 or dev > 1e-7
               or out.normal_form is not NormalForm.DIAGONAL)
        res.record(out.residual, bad, rho, i)
    res.details["slocc_max_dev"] = slocc
    return res


def suite_variational(seed=1, n=200, tol=1e-9, n_samples=500):
    """Sampled variational traces never undercut the closed forms; optimizers reach them."""
    res = SuiteResult("variational", n, tol)
    opt_dev = 0.0
    for i, rng in enumerate(trial_rngs(seed, n)):
        rho = wishart_state(rng)
        r = rho_to_r(rho)
        mins, closed = variational_sweep(r, n_samples, rng)
        gap = float(np.max(closed - mins))
        l1, l2 = variational_optimizers(r)
        dev = max(abs(variational_trace(r, l1, l2, k) - closed[k - 1]) for k in (1, 2, 3, 4))
        opt_dev = max(opt_dev, dev)
        res.record(max(gap, 0.0), gap > tol or dev > 1e-8, rho, i)
    res.details["optimizer_max_dev"] = opt_dev
    return res


def suite_monotone(seed=1, n=1000, tol=1e-7):
    """Expected M1, M2 never increase under random two-outcome local filtering.

    Each trial draws a fresh state of random rank and one filter per party.
    """
    res = SuiteResult("monotone", n, tol)
    for i, rng in enumerate(trial_rngs(seed, n)):
        rho = wishart_state(rng, rank=int(rng.integers(1, 5)))
        worst = monotone_mc_check(rho, 1, rng)
        res.record(-worst, worst < -tol, rho, i)
    return res


def suite_convert(seed=1, n=1000, tol=0.0):
    """Closed-form mixing verdicts agree with the refined grid search."""
    res = SuiteResult("convert", n, tol)
    feasible = 0
    for i, rng in enumerate(trial_rngs(seed, n)):
        lam, mu = random_spectrum_pair(rng)
        v = solve_mixing_system(lam, mu)
        g, _ = grid_feasibility(lam, mu)
        feasible += v.feasible
        res.record(float(v.feasible != g), v.feasible != g, bell_diagonal(lam), i,
                   target_spectrum=" ".join(repr(float(x)) for x in mu))
    res.details["feasible"] = feasible
    return res


def suite_tripartite(seed=1, n=100, tol=1e-7, orbit=20):
    """Filters reach GHZ/W and classification is constant along filter orbits."""
    res = SuiteResult("tripartite", n, tol)
    for i, rng in enumerate(trial_rngs(seed, n)):
        for make, cls, filt, target in ((random_ghz_class, Slocc3Class.GHZ_CLASS, ghz_filters, GHZ),
                                        (random_w_class, Slocc3Class.W_CLASS, w_filters, W)):
            psi = make(rng)
            r = image_residual(psi, filt(psi), target)
            same = True
            for _ in range(orbit):
                mats = [random_sl2c(rng, 0.3) for _ in range(3)]
                v = np.kron(np.kron(mats[0], mats[1]), mats[2]) @ psi
                same &= classify3(v / np.linalg.norm(v)) is cls
            res.record(r, r > tol or not same, psi, i)
    return res


def suite_appendix(seed=1, n=10, tol=1e-6):
    """Ratio solver matches the grid oracle on GHZ-class states."""
    res = SuiteResult("appendix", n, tol)
    worst_ratio = 0.0
    for i, rng in enumerate(trial_rngs(seed, n)):
        psi = random_ghz_class(rng)
        out = optimal_ghz_distillation(psi)
        p_or, _, _ = ghz_grid_oracle(psi)
        rr = ratio_residual(psi, out)
        worst_ratio = max(worst_ratio, rr)
        dev = abs(out.p_opt - p_or)
        res.record(dev, dev > tol or rr > 1e-8, psi, i)
    res.details["ratio_max_residual"] = worst_ratio
    return res


RUNNERS = {
    "lsvd": suite_lsvd,
    "variational": suite_variational,
    "monotone": suite_monotone,
    "convert": suite_convert,
    "tripartite": suite_tripartite,
    "appendix": suite_appendix,
}


def run_suite(name, seed=1, n=None, tol=None):
    if name not in RUNNERS:
        raise ValidationError(f"unknown suite {name!r}; choose from {SUITES}")
    kwargs = {"seed": seed}
    if n is not None:
        kwargs["n"] = n
    if tol is not None:
        kwargs["tol"] = tol
    return RUNNERS[name](**kwargs)
