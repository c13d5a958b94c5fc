"""scikit-learn style wrappers over the functional core.

Inputs are stacks of states: ``(n, 4, 4)`` density matrices or ``(n, 8)``
three-qubit amplitudes.  ``fit`` only validates and records the input
shape; every estimator is stateless apart from its hyperparameters.
"""
import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin

from ._validation import check_density_matrix, check_pure3
from .decomposition import lsvd
from .distillation import optimal_ghz_distillation, optimal_w_distillation
from .exceptions import ValidationError
from .lorentz import rho_to_r
from .monotones import monotone_report
from .tripartite import branch_success_probability, classify3


def _stack_density(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim == 2:
        x = x[None]
    if x.ndim != 3 or x.shape[1:] != (4, 4):
        raise ValidationError(f"expected an (n, 4, 4) stack of density matrices, got {x.shape}")
    return np.stack([check_density_matrix(r, normalize=True) for r in x])


def _stack_pure3(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        x = x[None]
    if x.ndim != 2 or x.shape[1] != 8:
        raise ValidationError(f"expected an (n, 8) stack of amplitudes, got {x.shape}")
    return np.stack([check_pure3(v, normalize=True) for v in x])


class LorentzSVD(TransformerMixin, BaseEstimator):
    """Map two-qubit states to their Lorentz singular values.

    Parameters
    ----------
    cluster_tol : float
        Relative gap below which eigenvalues of ``R eta R^T eta`` are merged.

    Attributes
    ----------
    results_ : list of LsvdResult
        Full decompositions from the last :meth:`transform` call.

    Examples
    --------
    >>> from lorentzsvd.states import werner
    >>> LorentzSVD().fit_transform([werner(0.5)]).round(6).tolist()
    [[1.0, 0.5, 0.5, -0.5]]
    """

    def __init__(self, cluster_tol=1e-7):
        self.cluster_tol = cluster_tol

    def fit(self, X, y=None):
        self.n_features_in_ = 16
        _stack_density(X)
        return self

    def transform(self, X):
        X = _stack_density(X)
        self.results_ = [lsvd(rho_to_r(r), cluster_tol=self.cluster_tol) for r in X]
        return np.array([res.s for res in self.results_])

    def normal_forms(self, X):
        """Class tag of each state."""
        self.transform(X)
        return np.array([res.normal_form.value for res in self.results_])


class EntanglementMonotones(TransformerMixin, BaseEstimator):
    """Columns ``M1, M2, concurrence, negativity`` for each state."""

    columns = ("m1", "m2", "concurrence", "negativity")

    def fit(self, X, y=None):
        _stack_density(X)
        return self

    def transform(self, X):
        reps = [monotone_report(r) for r in _stack_density(X)]
        return np.array([[getattr(rep, c) for c in self.columns] for rep in reps])

    def get_feature_names_out(self, input_features=None):
        return np.array(self.columns, dtype=object)


class SloccClassifier(ClassifierMixin, BaseEstimator):
    """Three-qubit SLOCC class from 3-tangle and marginal ranks.

    There is nothing to learn: ``predict`` is the exact classification and
    ``fit`` only records the label set seen in ``y`` (if given).
    """

    def __init__(self, tol=1e-9):
        self.tol = tol

    def fit(self, X, y=None):
        _stack_pure3(X)
        if y is not None:
            self.classes_ = np.unique(np.asarray(y, dtype=object).astype(str))
        return self

    def predict(self, X):
        return np.array([classify3(v, self.tol).value for v in _stack_pure3(X)], dtype=object)


class GHZDistiller(BaseEstimator):
    """Optimal single-copy GHZ distillation for each GHZ-class state.

    ``transform`` returns ``(p_opt, a_opt, b_opt, tau)`` rows; the full
    results are kept in ``results_``.
    """

    def fit(self, X, y=None):
        _stack_pure3(X)
        return self

    def transform(self, X):
        self.results_ = [optimal_ghz_distillation(v) for v in _stack_pure3(X)]
        return np.array([[r.p_opt, r.a_opt, r.b_opt, r.tau] for r in self.results_])

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)

    def predict(self, X):
        """Optimal success probabilities."""
        return self.transform(X)[:, 0]


class WDistiller(BaseEstimator):
    """Multi-start W distillation over the restricted filter family.

    Parameters
    ----------
    n_starts : int
        Nelder-Mead restarts per party.
    random_state : int
        Seed for the restart points.
    tol : float
        Convergence tolerance on the success probability.
    """

    def __init__(self, n_starts=20, random_state=0, tol=1e-9):
        self.n_starts = n_starts
        self.random_state = random_state
        self.tol = tol

    def fit(self, X, y=None):
        _stack_pure3(X)
        return self

    def transform(self, X):
        X = _stack_pure3(X)
        self.filters_ = [optimal_w_distillation(v, self.n_starts, self.random_state, self.tol)[0]
                         for v in X]
        return np.array([branch_success_probability(v, f) for v, f in zip(X, self.filters_)])

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)

    predict = transform
