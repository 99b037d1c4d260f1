"""Universal distributions over sequences.

Each distribution exposes the joint log-probability of a full sequence
(``log_prob``), prefix marginals at a fixed horizon (``log_prefix``) and
one-step-ahead predictive log-probabilities (``log_predictive``,
``log_losses``).  The chain rule ties them together: the per-step losses of a
sequence add up to minus its joint log-probability.

Bayes marginals and the prequential plug-in are horizon-free: the probability
of a prefix does not depend on how long the sequence will be.  NML and the
two-part code are defined per horizon ``n``; their prefix marginals sum over
all continuations up to ``n``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln, logsumexp, xlogy

from ._validation import check_int, check_positive
from .complexity import (
    bernoulli_penalized_maxima,
    comp_bernoulli,
    comp_markov,
    comp_multinomial_exact,
    ComplexityValue,
    Method,
    _markov_log_ml,
)
from .exceptions import (
    ComplexityDivergesError,
    InvalidInputError,
    InvalidLuckinessError,
    NoDataRemainingError,
    UndefinedStartError,
    UnsupportedPriorError,
)
from .models import (
    LOG_2PI,
    Bernoulli,
    DiscretizedMass,
    GaussianLocation,
    LinearRegression,
    MarkovChain,
    Multinomial,
    Singleton,
    Uniform,
    _contexts,
)

# suffix enumeration limits for prefix marginals of horizon-dependent codes
MAX_SUFFIX_COMPOSITIONS = 1_000_000
MAX_SUFFIX_SEQUENCES = 1 << 16


# ---------------------------------------------------------------------------
# priors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Beta:
    """Beta prior on the probability of ``1``; predictive ``(m1 + a)/(m + a + b)``."""

    a: float = 0.5
    b: float = 0.5

    def __post_init__(self):
        check_positive("a", self.a)
        check_positive("b", self.b)

    def alphas(self, r=2):
        if r != 2:
            raise UnsupportedPriorError("a Beta prior needs a binary alphabet")
        return np.array([self.b, self.a], dtype=float)


@dataclass(frozen=True)
class Dirichlet:
    alphas_: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas_)
        if any(not (np.isfinite(a) and a > 0) for a in alphas):
            raise InvalidInputError("Dirichlet hyperparameters must be > 0")
        object.__setattr__(self, "alphas_", alphas)

    @classmethod
    def symmetric(cls, r, alpha=0.5):
        return cls((alpha,) * r)

    def alphas(self, r):
        if len(self.alphas_) != r:
            raise UnsupportedPriorError(f"Dirichlet has {len(self.alphas_)} components, alphabet has {r}")
        return np.asarray(self.alphas_)


@dataclass(frozen=True)
class Normal:
    """Normal prior on a Gaussian location parameter."""

    mean: float = 0.0
    var: float = 1.0

    def __post_init__(self):
        check_positive("var", self.var)


def jeffreys_prior(family):
    """Jeffreys' prior for a categorical family: Beta(½,½) / Dir(½,…,½)."""
    if isinstance(family, Bernoulli):
        return Beta(0.5, 0.5)
    if isinstance(family, (Multinomial, MarkovChain)):
        return Dirichlet.symmetric(family.r, 0.5)
    raise UnsupportedPriorError(f"no proper Jeffreys prior for {type(family).__name__}")


# ---------------------------------------------------------------------------
# data helpers
# ---------------------------------------------------------------------------


def _length(data):
    if isinstance(data, tuple):
        return len(data[1])
    return len(data)


def _head(data, i):
    if isinstance(data, tuple):
        return (data[0][:i], data[1][:i])
    return data[:i]


def _append(history, outcome):
    if isinstance(history, tuple):
        x, y = outcome
        X, Y = history
        x = np.atleast_2d(np.asarray(x, dtype=float))
        X = np.asarray(X, dtype=float).reshape(-1, x.shape[1])
        return (np.vstack([X, x]), np.append(np.asarray(Y, dtype=float), y))
    return np.append(np.asarray(history), outcome)


def _running_counts(keys):
    """For each position ``i``, the number of ``j < i`` with ``keys[j] == keys[i]``."""
    keys = np.asarray(keys)
    out = np.zeros(keys.size, dtype=np.int64)
    if keys.size == 0:
        return out
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    starts = np.r_[0, np.flatnonzero(np.diff(sorted_keys)) + 1]
    group_start = np.repeat(starts, np.diff(np.r_[starts, keys.size]))
    out[order] = np.arange(keys.size) - group_start
    return out


def _compositions(total, parts):
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    if parts == 2:
        k = np.arange(total + 1, dtype=np.int64)
        return np.stack([total - k, k], axis=1)
    rows = []
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        row = []
        for b in bars:
            row.append(b - prev - 1)
            prev = b
        row.append(total + parts - 2 - prev)
        rows.append(row)
    return np.asarray(rows, dtype=np.int64)


def _log_multinomial_coef(counts):
    counts = np.asarray(counts, dtype=float)
    return gammaln(counts.sum(axis=-1) + 1) - gammaln(counts + 1).sum(axis=-1)


# ---------------------------------------------------------------------------
# base class
# ---------------------------------------------------------------------------


class UniversalDistribution:
    """Interface shared by all universal distributions."""

    family = None
    horizon_free = True

    def log_prob(self, data):
        """Joint ``log ū(z^n)`` at horizon ``n = len(data)``."""
        raise NotImplementedError

    def log_prefix(self, prefix, horizon=None):
        """Marginal log-probability of ``prefix`` under the horizon-``n`` joint."""
        m = _length(prefix)
        horizon = m if horizon is None else horizon
        if horizon < m:
            raise InvalidInputError(f"horizon {horizon} is shorter than the prefix ({m})")
        if m == 0:
            return 0.0
        if self.horizon_free or horizon == m:
            return self.log_prob(prefix)
        return self._log_prefix_dependent(prefix, horizon)

    def _log_prefix_dependent(self, prefix, horizon):
        raise NotImplementedError(f"{type(self).__name__} has no prefix marginals")

    def log_predictive(self, history, outcome, horizon=None):
        """``log ū(z_{i} | z^{i-1})``; ``horizon`` matters only for NML / two-part."""
        extended = _append(history, outcome)
        horizon = _length(extended) if horizon is None else horizon
        return self.log_prefix(extended, horizon) - self.log_prefix(history, horizon)

    def log_losses(self, data):
        """Per-step log losses ``-log ū(z_i | z^{i-1})`` at horizon ``len(data)``."""
        n = _length(data)
        prefixes = np.array([self.log_prefix(_head(data, i), n) for i in range(n + 1)])
        return -np.diff(prefixes)

    def conditional_log_prob(self, data, start):
        """``log ū(z_{start+1}, …, z_n | z^start)`` at horizon ``n``."""
        n = _length(data)
        return self.log_prefix(data, n) - self.log_prefix(_head(data, start), n)


# ---------------------------------------------------------------------------
# Bayes
# ---------------------------------------------------------------------------


def _dirichlet_log_marginal(counts, alphas):
    counts = np.atleast_2d(np.asarray(counts, dtype=float))
    total_alpha = alphas.sum()
    return float(
        np.sum(gammaln(total_alpha) - gammaln(total_alpha + counts.sum(axis=1)))
        + np.sum(gammaln(alphas + counts) - gammaln(alphas))
    )


class BayesMarginal(UniversalDistribution):
    """Bayesian marginal likelihood under a conjugate prior.

    Supported pairs: Beta or Dirichlet with Bernoulli / Multinomial, per-context
    Dirichlet with Markov chains, Normal with the Gaussian location family.
    """

    def __init__(self, family, prior=None):
        self.family = family
        if prior is None:
            prior = jeffreys_prior(family)
        self.prior = prior
        if isinstance(family, (Multinomial, MarkovChain)):
            if not isinstance(prior, (Beta, Dirichlet)):
                raise UnsupportedPriorError(f"{type(prior).__name__} is not conjugate to {type(family).__name__}")
            self._alphas = prior.alphas(family.r)
        elif isinstance(family, GaussianLocation):
            if not isinstance(prior, Normal):
                raise UnsupportedPriorError("the Gaussian location family needs a Normal prior")
        else:
            raise UnsupportedPriorError(f"no conjugate Bayes marginal for {type(family).__name__}")

    def __repr__(self):
        return f"BayesMarginal({self.family!r}, {self.prior!r})"

    def log_prob(self, data):
        family = self.family
        if isinstance(family, MarkovChain):
            stats = family.sufficient_stats(data)
            return -len(stats.head) * np.log(family.r) + _dirichlet_log_marginal(stats.counts, self._alphas)
        if isinstance(family, Multinomial):
            return _dirichlet_log_marginal(family.sufficient_stats(data).counts, self._alphas)
        # y ~ N(mu0 1, sigma2 I + tau2 1 1ᵀ)
        z = family.check_data(data) - self.prior.mean
        n = z.size
        s2, t2 = family.sigma2, self.prior.var
        total = z.sum()
        quad = (z @ z - t2 * total**2 / (s2 + n * t2)) / s2
        logdet = n * np.log(s2) + np.log1p(n * t2 / s2)
        return float(-0.5 * (n * LOG_2PI + logdet + quad))

    def log_losses(self, data):
        family = self.family
        if isinstance(family, GaussianLocation):
            z = family.check_data(data)
            m = np.arange(z.size)
            sums = np.r_[0.0, np.cumsum(z)[:-1]] if z.size else np.zeros(0)
            post_var = 1.0 / (1.0 / self.prior.var + m / family.sigma2)
            post_mean = post_var * (self.prior.mean / self.prior.var + sums / family.sigma2)
            pred_var = family.sigma2 + post_var
            return 0.5 * (LOG_2PI + np.log(pred_var)) + (z - post_mean) ** 2 / (2 * pred_var)
        data = family.check_data(data)
        alphas = self._alphas
        if isinstance(family, MarkovChain) and family.order:
            k = family.order
            head = np.full(min(k, data.size), np.log(family.r))
            ctx = _contexts(data, k, family.r)
            sym = data[k:]
            before_cell = _running_counts(ctx * family.r + sym)
            before_ctx = _running_counts(ctx)
            tail = -np.log((before_cell + alphas[sym]) / (before_ctx + alphas.sum()))
            return np.r_[head, tail]
        before = _running_counts(data)
        return -np.log((before + alphas[data]) / (np.arange(data.size) + alphas.sum()))

    def log_predictive(self, history, outcome, horizon=None):
        family = self.family
        if isinstance(family, GaussianLocation):
            z = family.check_data(history)
            post_var = 1.0 / (1.0 / self.prior.var + z.size / family.sigma2)
            post_mean = post_var * (self.prior.mean / self.prior.var + z.sum() / family.sigma2)
            pred_var = family.sigma2 + post_var
            return float(-0.5 * (LOG_2PI + np.log(pred_var)) - (outcome - post_mean) ** 2 / (2 * pred_var))
        history = family.check_data(history)
        outcome = int(family.check_data([outcome])[0])
        alphas = self._alphas
        if isinstance(family, MarkovChain) and family.order:
            k = family.order
            if history.size < k:
                return float(-np.log(family.r))
            stats = family.sufficient_stats(history)
            row = stats.counts[_ctx_index(history[-k:], family.r)]
            return float(np.log((row[outcome] + alphas[outcome]) / (row.sum() + alphas.sum())))
        counts = np.bincount(history, minlength=family.r)
        return float(np.log((counts[outcome] + alphas[outcome]) / (history.size + alphas.sum())))


def _ctx_index(symbols, r):
    idx = 0
    for s in symbols:
        idx = idx * r + int(s)
    return idx


class ConditionalBayes(UniversalDistribution):
    """Bayes under the improper flat prior on a Gaussian location, conditioned
    on the first ``start`` outcomes.

    The first ``start`` outcomes contribute no model-dependent term: their
    predictive losses are reported as zero, and ``log_prob`` returns
    ``log ū(z_{start+1..n} | z^start)``.
    """

    def __init__(self, family, start=1, prior="flat"):
        if prior != "flat" or not isinstance(family, GaussianLocation):
            raise UnsupportedPriorError("conditional Bayes supports the flat prior on a Gaussian location")
        self.family = family
        self.start = check_int("start", start, minimum=1)
        self.prior = prior

    def __repr__(self):
        return f"ConditionalBayes({self.family!r}, start={self.start})"

    def _log_improper(self, z):
        # log ∫ prod_i N(z_i; theta, s2) dtheta
        k = z.size
        if k == 0:
            return 0.0
        s2 = self.family.sigma2
        ss = float(np.sum((z - z.mean()) ** 2))
        return -0.5 * (k - 1) * (LOG_2PI + np.log(s2)) - 0.5 * np.log(k) - ss / (2 * s2)

    def log_prob(self, data):
        z = self.family.check_data(data)
        if self.start >= z.size:
            raise NoDataRemainingError(f"start-up length {self.start} leaves no outcomes out of {z.size}")
        return self._log_improper(z) - self._log_improper(z[: self.start])

    def log_prefix(self, prefix, horizon=None):
        if _length(prefix) <= self.start:
            return 0.0
        return self.log_prob(prefix)

    def log_losses(self, data):
        z = self.family.check_data(data)
        s2 = self.family.sigma2
        losses = np.zeros(z.size)
        for i in range(self.start, z.size):
            mean = z[:i].mean()
            var = s2 * (1.0 + 1.0 / i)
            losses[i] = 0.5 * (LOG_2PI + np.log(var)) + (z[i] - mean) ** 2 / (2 * var)
        return losses


# ---------------------------------------------------------------------------
# NML
# ---------------------------------------------------------------------------


class NML(UniversalDistribution):
    """(Luckiness-)normalized maximum likelihood for discrete families.

    Exact for Bernoulli (any supported luckiness), multinomial and Markov
    families with uniform luckiness, and singleton models.
    """

    horizon_free = False

    def __init__(self, family, luckiness=None):
        luckiness = Uniform() if luckiness is None else luckiness
        self.family = family
        self.luckiness = luckiness
        if isinstance(family, Singleton):
            self.horizon_free = True
        elif isinstance(family, (GaussianLocation, LinearRegression)):
            raise ComplexityDivergesError(
                "the NML normalizer diverges for continuous families with uniform luckiness; "
                "use LNMLRegression or a conditional code"
            )
        elif isinstance(family, Bernoulli):
            if not isinstance(luckiness, Uniform):
                comp_bernoulli(1, luckiness)  # validates the luckiness type
        elif isinstance(family, (Multinomial, MarkovChain)):
            if not isinstance(luckiness, Uniform):
                raise InvalidLuckinessError("non-uniform luckiness is supported for the Bernoulli family only")
        else:
            raise InvalidInputError(f"NML is not available for {type(family).__name__}")

    def __repr__(self):
        return f"NML({self.family!r}, {self.luckiness!r})"

    def complexity(self, n):
        family = self.family
        if isinstance(family, Singleton):
            return ComplexityValue(0.0, Method.EXACT_SUM, n, "singleton")
        if isinstance(family, Bernoulli):
            return comp_bernoulli(n, self.luckiness)
        if isinstance(family, MarkovChain):
            return comp_markov(n, family.order, family.r)
        return comp_multinomial_exact(n, family.r)

    def _max_score(self, counts):
        """Maximized (penalized) log-likelihood of i.i.d. count vectors."""
        counts = np.atleast_2d(np.asarray(counts, dtype=float))
        if isinstance(self.family, Bernoulli):
            return bernoulli_penalized_maxima(counts[:, 1], counts[:, 0], self.luckiness)
        totals = counts.sum(axis=1, keepdims=True)
        return np.sum(xlogy(counts, counts / np.where(totals > 0, totals, 1.0)), axis=1)

    def log_prob(self, data):
        family = self.family
        n = family.length(data)
        if isinstance(family, Singleton):
            return family.log_likelihood(None, data)
        if isinstance(family, MarkovChain):
            best = family.log_likelihood(family.mle(data), data) if n else 0.0
        else:
            best = float(self._max_score(family.sufficient_stats(data).counts)[0])
        return best - self.complexity(n).nats

    def _log_prefix_dependent(self, prefix, horizon):
        family = self.family
        suffix = horizon - family.length(prefix)
        comp = self.complexity(horizon).nats
        if isinstance(family, MarkovChain):
            if family.r**suffix > MAX_SUFFIX_SEQUENCES:
                raise InvalidInputError(f"prefix marginal needs {family.r}^{suffix} continuations; too many")
            prefix = family.check_data(prefix)
            tails = np.array(list(itertools.product(range(family.r), repeat=suffix)), dtype=np.int64)
            seqs = np.hstack([np.tile(prefix, (tails.shape[0], 1)), tails.reshape(tails.shape[0], suffix)])
            k = min(family.order, horizon)
            return float(logsumexp(_markov_log_ml(seqs, family.order, family.r)) - k * np.log(family.r) - comp)
        counts = np.asarray(family.sufficient_stats(prefix).counts)
        if math.comb(suffix + family.r - 1, family.r - 1) > MAX_SUFFIX_COMPOSITIONS:
            raise InvalidInputError("prefix marginal needs too many suffix count vectors")
        extra = _compositions(suffix, family.r)
        terms = _log_multinomial_coef(extra) + self._max_score(counts + extra)
        return float(logsumexp(terms) - comp)


def _lnml_terms(X, y, sigma2, cov):
    """Pieces of the Gaussian-luckiness NML code length of ``y`` given ``X``."""
    n, m = X.shape
    base = 0.5 * n * (LOG_2PI + np.log(sigma2))
    if m == 0:
        return base + float(y @ y) / (2 * sigma2), np.zeros(0)
    prec = np.linalg.inv(cov)
    A = X.T @ X + prec
    beta = np.linalg.solve(A, X.T @ y)
    resid = y - X @ beta
    fit = (float(resid @ resid) + float(beta @ prec @ beta)) / (2 * sigma2)
    _, logdet_a = np.linalg.slogdet(A)
    _, logdet_cov = np.linalg.slogdet(cov)
    return fit + base + 0.5 * logdet_a + 0.5 * logdet_cov, beta


class LNMLRegression(UniversalDistribution):
    """Luckiness NML for linear regression with known noise variance.

    The luckiness is ``exp(-βᵀ Σ⁻¹ β / 2σ²)``; the resulting code length

        RSS(β̂)/2σ² + β̂ᵀΣ⁻¹β̂/2σ² + n/2 log 2πσ² + ½ log|XᵀX + Σ⁻¹| + ½ log|Σ|

    coincides with the Bayes marginal under the prior ``N(0, σ²Σ)``, so the
    code is horizon-free and predicts with the Gaussian posterior predictive.
    """

    def __init__(self, m, sigma2=1.0, cov=None):
        self.m = check_int("m", m, minimum=0)
        self.sigma2 = check_positive("sigma2", sigma2)
        cov = np.eye(self.m) if cov is None else np.atleast_2d(np.asarray(cov, dtype=float))
        if self.m == 0:
            cov = np.zeros((0, 0))
        if cov.shape != (self.m, self.m) or not np.allclose(cov, cov.T):
            raise InvalidLuckinessError(f"luckiness covariance must be a symmetric {self.m}x{self.m} matrix")
        if self.m and np.linalg.eigvalsh(cov).min() <= 0:
            raise InvalidLuckinessError("luckiness covariance must be positive definite")
        self.cov = cov
        self.family = LinearRegression(max(self.m, 1), self.sigma2)

    def __repr__(self):
        return f"LNMLRegression(m={self.m}, sigma2={self.sigma2})"

    def _check(self, data):
        X, y = data
        X = np.asarray(X, dtype=float).reshape(len(y), self.m)
        y = np.asarray(y, dtype=float)
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise InvalidInputError("regression data must be finite")
        return X, y

    def log_prob(self, data):
        X, y = self._check(data)
        if y.size == 0:
            return 0.0
        return -_lnml_terms(X, y, self.sigma2, self.cov)[0]

    def mdl_estimate(self, data):
        X, y = self._check(data)
        return _lnml_terms(X, y, self.sigma2, self.cov)[1]

    def log_losses(self, data):
        X, y = self._check(data)
        if self.m == 0:
            return 0.5 * (LOG_2PI + np.log(self.sigma2)) + y**2 / (2 * self.sigma2)
        A = np.linalg.inv(self.cov)
        b = np.zeros(self.m)
        losses = np.empty(y.size)
        for i in range(y.size):
            x = X[i]
            mean = x @ np.linalg.solve(A, b)
            var = self.sigma2 * (1.0 + x @ np.linalg.solve(A, x))
            losses[i] = 0.5 * (LOG_2PI + np.log(var)) + (y[i] - mean) ** 2 / (2 * var)
            A = A + np.outer(x, x)
            b = b + x * y[i]
        return losses


# ---------------------------------------------------------------------------
# two-part and plug-in codes
# ---------------------------------------------------------------------------


class TwoPart(UniversalDistribution):
    """Two-part code: name a grid point with mass ``w``, then the data with it.

    A sub-distribution; its deficiency is reported, never renormalized.
    """

    horizon_free = False

    def __init__(self, family, grid, weights=None):
        grid = tuple(grid)
        if weights is None:
            weights = np.full(len(grid), 1.0 / max(len(grid), 1))
        self.family = family
        self.mass = DiscretizedMass(grid, tuple(weights))

    def __repr__(self):
        return f"TwoPart({self.family!r}, grid={self.mass.grid})"

    def log_prob(self, data):
        scores = [self.family.log_likelihood(p, data) + lw for p, lw in zip(self.mass.grid, self.mass.log_weights)]
        return float(np.max(scores))

    def _log_prefix_dependent(self, prefix, horizon):
        family = self.family
        if not isinstance(family, Multinomial):
            raise InvalidInputError("two-part prefix marginals are available for i.i.d. categorical families")
        suffix = horizon - family.length(prefix)
        counts = np.asarray(family.sufficient_stats(prefix).counts)
        extra = _compositions(suffix, family.r) + counts
        if isinstance(family, Bernoulli):
            grid = np.asarray(self.mass.grid, dtype=float)
            grid = np.stack([1.0 - grid, grid], axis=1)
        else:
            grid = np.asarray(self.mass.grid, dtype=float)
        scores = (xlogy(extra[:, None, :], grid[None, :, :]).sum(axis=2) + self.mass.log_weights).max(axis=1)
        return float(logsumexp(_log_multinomial_coef(extra - counts) + scores))


class PluginPredictor(UniversalDistribution):
    """Prequential plug-in code: predict each outcome with an estimate from the past.

    ``estimator="smoothed"`` (categorical families) predicts
    ``(m_j + a) / (m + r a)`` with ``a = pseudocount``; in a Markov chain this is
    applied per context.  ``estimator="ml"`` uses the raw ML estimate; for the
    Gaussian location family the first outcome is predicted by
    ``N(start_mean, sigma2)``.
    """

    def __init__(self, family, estimator="smoothed", pseudocount=0.5, start_mean=0.0):
        if estimator not in ("smoothed", "ml"):
            raise InvalidInputError(f"unknown estimator {estimator!r}")
        if isinstance(family, GaussianLocation):
            if estimator != "ml":
                raise InvalidInputError("the Gaussian location plug-in uses the ML estimator")
        elif not isinstance(family, (Multinomial, MarkovChain)):
            raise InvalidInputError(f"no plug-in predictor for {type(family).__name__}")
        self.family = family
        self.estimator = estimator
        self.pseudocount = check_positive("pseudocount", pseudocount) if estimator == "smoothed" else 0.0
        self.start_mean = float(start_mean)

    def __repr__(self):
        return f"PluginPredictor({self.family!r}, estimator={self.estimator!r})"

    def log_losses(self, data):
        family = self.family
        if isinstance(family, GaussianLocation):
            z = family.check_data(data)
            means = np.r_[self.start_mean, np.cumsum(z)[:-1] / np.arange(1, z.size)] if z.size else np.zeros(0)
            return 0.5 * (LOG_2PI + np.log(family.sigma2)) + (z - means) ** 2 / (2 * family.sigma2)
        data = family.check_data(data)
        a, r = self.pseudocount, family.r
        k = family.order if isinstance(family, MarkovChain) else 0
        head = np.full(min(k, data.size), np.log(r))
        if k:
            ctx = _contexts(data, k, r)
            sym = data[k:]
            cell, tot = _running_counts(ctx * r + sym), _running_counts(ctx)
        else:
            sym = data
            cell, tot = _running_counts(data), np.arange(data.size)
        if self.estimator == "ml" and np.any(tot == 0):
            raise UndefinedStartError("the ML plug-in cannot predict from an empty history; use estimator='smoothed'")
        with np.errstate(divide="ignore"):
            tail = -np.log((cell + a) / (tot + r * a))
        return np.r_[head, tail]

    def log_prob(self, data):
        return float(-np.sum(self.log_losses(data)))

    def log_predictive(self, history, outcome, horizon=None):
        extended = _append(history, outcome)
        return float(-self.log_losses(extended)[-1])


class PointMass(UniversalDistribution):
    """A single fixed distribution ``p_theta`` used as a code."""

    def __init__(self, family, params):
        self.family = family
        self.params = params
        family.check_params(params)

    def __repr__(self):
        return f"PointMass({self.family!r}, {self.params!r})"

    def log_prob(self, data):
        return self.family.log_likelihood(self.params, data)

    def sample(self, n, rng):
        return self.family.sample(self.params, n, rng)


# ---------------------------------------------------------------------------
# functional API
# ---------------------------------------------------------------------------


def bayes_log_marginal(family, prior, data):
    return BayesMarginal(family, prior).log_prob(data)


def bayes_log_predictive(family, prior, history, next_outcome):
    return BayesMarginal(family, prior).log_predictive(history, next_outcome)


def conditional_bayes_log(family, improper_prior, m, data):
    return ConditionalBayes(family, m, improper_prior).log_prob(data)


def nml_log_marginal(family, luckiness, data):
    return NML(family, luckiness).log_prob(data)


def lnml_regression_log(data, sigma2, cov):
    X, y = data
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    return LNMLRegression(X.shape[1], sigma2, cov).log_prob((X, y))


def two_part_log(family, grid, weights, data):
    return TwoPart(family, grid, weights).log_prob(data)


def preq_plugin_log(family, estimator, data, **kwargs):
    return PluginPredictor(family, estimator, **kwargs).log_prob(data)


def regret(u, family, data):
    """``-log ū(z^n) + log p_{θ̂(z^n)}(z^n)``: excess code length over hindsight ML."""
    if isinstance(family, LinearRegression) and isinstance(u, LNMLRegression) and u.m != family.m:
        raise InvalidInputError("regression family and code disagree on the number of covariates")
    return -u.log_prob(data) + family.log_likelihood(family.mle(data), data)
