import numpy as np
from sklearn.base import clone
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import StandardScaler

from lorentzsvd.estimators import (EntanglementMonotones, GHZDistiller, LorentzSVD,
                                   SloccClassifier, WDistiller)
from lorentzsvd.states import GHZ, W, generalized_ghz, werner, wishart_state


def test_params_and_clone():
    est = LorentzSVD(cluster_tol=1e-6)
    assert est.get_params() == {"cluster_tol": 1e-6}
    assert clone(est).cluster_tol == 1e-6
    w = clone(WDistiller(n_starts=3))
    assert w.get_params()["n_starts"] == 3


def test_lsvd_transform(rng):
    x = np.stack([wishart_state(rng) for _ in range(3)])
    est = LorentzSVD()
    s = est.fit_transform(x)
    assert s.shape == (3, 4) and len(est.results_) == 3
    assert list(est.normal_forms([werner(0.5)])) == ["Diagonal"]


def test_monotones_in_pipeline(rng):
    x = np.stack([wishart_state(rng) for _ in range(5)])
    pipe = make_pipeline(EntanglementMonotones(), StandardScaler())
    assert pipe.fit_transform(x).shape == (5, 4)
    names = EntanglementMonotones().get_feature_names_out()
    assert list(names) == ["m1", "m2", "concurrence", "negativity"]


def test_classifier():
    x = np.stack([GHZ, W])
    clf = SloccClassifier().fit(x, ["GHZclass", "Wclass"])
    assert list(clf.predict(x)) == ["GHZclass", "Wclass"]
    assert clf.score(x, ["GHZclass", "Wclass"]) == 1.0


def test_distillers():
    g = GHZDistiller().fit_transform([GHZ, generalized_ghz(0.25)])
    assert np.allclose(g[:, 0], [1.0, 0.5], atol=1e-6)
    assert np.allclose(WDistiller(n_starts=2).fit_transform([W]), [1.0])
