import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from mdlkit import MarkovChain, MarkovOrderSelector, MDLVariableSelector, StructureLearner


def regression(seed=0, n=150):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 4))
    y = 2.0 * X[:, 2] + rng.normal(size=n)
    return X, y


def test_variable_selector_api():
    X, y = regression()
    est = MDLVariableSelector(sigma2=1.0, c=2.0)
    assert est.get_params() == {"sigma2": 1.0, "c": 2.0, "strategy": "auto", "threads": None}
    est.fit(X, y)
    assert est.get_support().tolist() == [False, False, True, False]
    assert est.transform(X).shape == (150, 1)
    assert est.coef_[2] == pytest.approx(2.0, abs=0.2)
    assert est.score(X, y) > 0.7
    assert clone(est).get_params() == est.get_params()


def test_variable_selector_not_fitted():
    with pytest.raises(NotFittedError):
        MDLVariableSelector().predict(np.zeros((2, 2)))


def test_markov_order_selector():
    rng = np.random.default_rng(1)
    P = np.array([[0.9, 0.1], [0.2, 0.8]])
    z = MarkovChain(1, 2).sample(P, 1500, rng)
    est = MarkovOrderSelector(max_order=2).fit(z)
    assert est.order_ == 1 and est.alphabet_size_ == 2
    assert est.score(z) < 0
    assert est.set_params(max_order=1).get_params()["max_order"] == 1


def test_structure_learner():
    rng = np.random.default_rng(2)
    x = rng.integers(0, 2, 800)
    y = np.where(rng.random(800) < 0.1, 1 - x, x)
    X = np.c_[x, y]
    est = StructureLearner(score="qnml").fit(X)
    assert len(est.dag_.edges) == 1
    assert est.score_ == pytest.approx(sum(est.local_scores_))
    assert est.score_dag(X) == pytest.approx(est.score_)
    assert "max_parents" in est.get_params()
