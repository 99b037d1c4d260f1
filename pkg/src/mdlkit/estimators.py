"""scikit-learn compatible estimators built on the MDL machinery."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.feature_selection import SelectorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .bnscore import CategoricalDataset, LocalScoreCache, hill_climb, network_score
from .models import MarkovChain
from .selection import markov_order_select, parse_subset, variable_select
from .universal import BayesMarginal, LNMLRegression, jeffreys_prior


class MDLVariableSelector(SelectorMixin, RegressorMixin, BaseEstimator):
    """Subset selection for linear regression by total code length.

    Each subset is charged its Gaussian-luckiness NML code length (luckiness
    covariance ``c * I``) plus ``log(m+1) + log C(m, k)`` nats for naming it.

    Parameters
    ----------
    sigma2 : float
        Known noise variance.
    c : float
        Scale of the luckiness covariance on retained coefficients.
    strategy : {"auto", "exhaustive", "greedy-forward"}
        ``"auto"`` is exhaustive up to 20 features, greedy beyond.
    threads : int, optional
        Evaluate subsets concurrently.

    Attributes
    ----------
    support_ : ndarray of bool
    coef_ : ndarray
        MDL (ridge-form) coefficients, zero outside the support.
    codelength_ : float
        Code length of the selected subset in nats.
    results_ : SelectionResult
    """

    def __init__(self, sigma2=1.0, c=1.0, strategy="auto", threads=None):
        self.sigma2 = sigma2
        self.c = c
        self.strategy = strategy
        self.threads = threads

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float, y_numeric=True)
        m = X.shape[1]
        strategy = self.strategy
        if strategy == "auto":
            strategy = "exhaustive" if m <= 20 else "greedy-forward"
        self.results_ = variable_select(X, y, self.sigma2, self.c, strategy, self.threads)
        subset = list(parse_subset(self.results_.winner))
        self.support_ = np.zeros(m, dtype=bool)
        self.support_[subset] = True
        self.coef_ = np.zeros(m)
        if subset:
            code = LNMLRegression(len(subset), self.sigma2, self.c * np.eye(len(subset)))
            self.coef_[subset] = code.mdl_estimate((X[:, subset], y))
        self.codelength_ = self.results_.best.codelength
        self.n_features_in_ = m
        return self

    def _get_support_mask(self):
        check_is_fitted(self, "support_")
        return self.support_

    def predict(self, X):
        check_is_fitted(self, "coef_")
        X = check_array(X, dtype=float)
        return X @ self.coef_


class MarkovOrderSelector(BaseEstimator):
    """Pick the order of a Markov chain for a categorical sequence.

    Each order is coded by its per-context Jeffreys Bayes marginal.
    """

    def __init__(self, max_order=3, alphabet_size=None):
        self.max_order = max_order
        self.alphabet_size = alphabet_size

    def _sequence(self, X):
        X = check_array(np.asarray(X).reshape(-1, 1), dtype=np.int64, ensure_min_samples=1)
        return X.ravel()

    def fit(self, X, y=None):
        z = self._sequence(X)
        r = self.alphabet_size or max(int(z.max()) + 1, 2)
        self.alphabet_size_ = r
        self.results_ = markov_order_select(z, self.max_order, r)
        self.order_ = int(self.results_.winner.split("=")[1])
        self.codelength_ = self.results_.best.codelength
        return self

    def score(self, X, y=None):
        """Log-probability per symbol of ``X`` under the selected order."""
        check_is_fitted(self, "order_")
        z = self._sequence(X)
        family = MarkovChain(self.order_, self.alphabet_size_)
        return BayesMarginal(family, jeffreys_prior(family)).log_prob(z) / z.size


class StructureLearner(BaseEstimator):
    """Greedy Bayesian-network structure search under fNML, qNML or BDeu.

    Attributes
    ----------
    dag_ : Dag
    score_ : float
    local_scores_ : list of float
    trace_ : list of (iteration, move, score)
    """

    def __init__(self, score="fnml", alpha=1.0, max_parents=4, max_iters=1000, seed=0, threads=None):
        self.score = score
        self.alpha = alpha
        self.max_parents = max_parents
        self.max_iters = max_iters
        self.seed = seed
        self.threads = threads

    def _dataset(self, X, arities=None):
        if isinstance(X, CategoricalDataset):
            return X
        X = check_array(X, dtype=np.int64)
        return CategoricalDataset.from_array(X, arities)

    def fit(self, X, y=None):
        data = self._dataset(X)
        self.arities_ = data.arities
        self.n_features_in_ = data.p
        result = hill_climb(
            data, self.score, self.alpha, self.max_parents, self.max_iters, self.seed, self.threads,
            LocalScoreCache(data, self.score, self.alpha),
        )
        self.dag_ = result.dag
        self.score_ = result.score
        self.local_scores_ = result.local_scores
        self.trace_ = result.trace
        return self

    def score_dag(self, X):
        """Network score of the learned DAG on new data with the same arities."""
        check_is_fitted(self, "dag_")
        data = self._dataset(X, self.arities_)
        return network_score(self.dag_, data, self.score, self.alpha)
