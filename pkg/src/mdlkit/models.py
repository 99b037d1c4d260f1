"""Parametric model families, sufficient statistics and point estimators.

Every family is an immutable value object.  Data conventions:

* categorical families (``Bernoulli``, ``Multinomial``, ``MarkovChain``) take a
  1-d sequence of integer indices ``0..r-1``;
* ``GaussianLocation`` takes a 1-d sequence of reals;
* ``LinearRegression`` takes an ``(X, y)`` pair, ``X`` of shape ``(n, m)``.

Parameters are plain floats / numpy arrays:

=================  ==========================================
family             parameter
=================  ==========================================
Bernoulli          float, probability of outcome ``1``
Multinomial(r)     array of ``r`` probabilities
MarkovChain        array ``(r**order, r)`` of transition rows
GaussianLocation   float mean
LinearRegression   array of ``m`` coefficients
=================  ==========================================

All log-probabilities are in nats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import xlogy

from ._validation import (
    check_categorical,
    check_int,
    check_positive,
    check_real,
    check_regression,
)
from .exceptions import (
    DegenerateDesignError,
    InvalidInputError,
    InvalidLuckinessError,
)

LOG_2PI = float(np.log(2.0 * np.pi))

# bounds for 1-d golden-section search over a probability
GOLDEN_EPS = 1e-9
GOLDEN_TOL = 1e-10


# ---------------------------------------------------------------------------
# sufficient statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CountStats:
    """Category counts ``n_0..n_{r-1}``."""

    counts: tuple

    @property
    def n(self):
        return int(sum(self.counts))

    def add(self, outcome):
        counts = list(self.counts)
        counts[int(outcome)] += 1
        return CountStats(tuple(counts))


@dataclass(frozen=True, eq=False)
class TransitionStats:
    """Transition counts of an order-``k`` chain.

    ``head`` holds the first ``order`` symbols (scored uniformly), ``tail`` the
    most recent ``order`` symbols (the running context).
    """

    order: int
    r: int
    head: tuple
    tail: tuple
    counts: np.ndarray

    @property
    def n(self):
        return len(self.head) + int(self.counts.sum())

    def add(self, outcome):
        outcome = int(outcome)
        counts = self.counts.copy()
        if len(self.head) < self.order:
            head = self.head + (outcome,)
            return TransitionStats(self.order, self.r, head, head, counts)
        if self.order:
            counts[_context_of(self.tail, self.r), outcome] += 1
            tail = self.tail[1:] + (outcome,)
        else:
            counts[0, outcome] += 1
            tail = ()
        return TransitionStats(self.order, self.r, self.head, tail, counts)

    def __eq__(self, other):
        return (
            isinstance(other, TransitionStats)
            and (self.order, self.r, self.head, self.tail) == (other.order, other.r, other.head, other.tail)
            and np.array_equal(self.counts, other.counts)
        )


@dataclass(frozen=True)
class GaussianStats:
    n: int
    total: float
    total_sq: float

    def add(self, outcome):
        z = float(outcome)
        return GaussianStats(self.n + 1, self.total + z, self.total_sq + z * z)


@dataclass(frozen=True, eq=False)
class GramStats:
    """``XᵀX``, ``Xᵀy`` and ``yᵀy`` for a regression sample."""

    n: int
    xtx: np.ndarray
    xty: np.ndarray
    yty: float

    def add(self, outcome):
        x, y = outcome
        x = np.asarray(x, dtype=float)
        return GramStats(self.n + 1, self.xtx + np.outer(x, x), self.xty + x * y, self.yty + y * y)


def _context_of(symbols, r):
    """Base-``r`` index of a context tuple, oldest symbol most significant."""
    idx = 0
    for s in symbols:
        idx = idx * r + int(s)
    return idx


def _contexts(data, order, r):
    """Context index of every position ``i >= order``."""
    n = len(data)
    if n <= order:
        return np.zeros(0, dtype=np.int64)
    ctx = np.zeros(n - order, dtype=np.int64)
    for j in range(order, 0, -1):
        ctx = ctx * r + data[order - j : n - j]
    return ctx


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


class ModelFamily:
    """Common interface of the parametric families."""

    discrete = True
    dim = 0

    def check_data(self, data):
        raise NotImplementedError

    def length(self, data):
        return len(self.check_data(data))

    def sufficient_stats(self, data):
        raise NotImplementedError

    def log_likelihood(self, params, data):
        raise NotImplementedError

    def mle(self, data):
        raise NotImplementedError

    def sample(self, params, n, rng):
        raise NotImplementedError


@dataclass(frozen=True)
class Multinomial(ModelFamily):
    """I.i.d. categorical outcomes over ``r`` symbols."""

    r: int = 2

    def __post_init__(self):
        check_int("r", self.r, minimum=2)

    @property
    def dim(self):
        return self.r - 1

    @property
    def arity(self):
        return self.r

    def check_data(self, data):
        return check_categorical(data, self.r)

    def check_params(self, params):
        theta = np.atleast_1d(np.asarray(params, dtype=float))
        if theta.shape != (self.r,):
            raise InvalidInputError(f"expected {self.r} probabilities, got shape {theta.shape}")
        if np.any(theta < 0) or np.any(theta > 1) or abs(theta.sum() - 1.0) > 1e-9:
            raise InvalidInputError("probabilities must lie in [0, 1] and sum to 1")
        return theta

    def sufficient_stats(self, data):
        data = self.check_data(data)
        return CountStats(tuple(int(c) for c in np.bincount(data, minlength=self.r)))

    def log_likelihood(self, params, data):
        theta = self.check_params(params)
        counts = np.asarray(self.sufficient_stats(data).counts)
        return float(np.sum(xlogy(counts, theta)))

    def mle(self, data):
        data = self.check_data(data)
        if data.size == 0:
            raise InvalidInputError("maximum likelihood needs at least one outcome")
        return np.bincount(data, minlength=self.r) / data.size

    def sample(self, params, n, rng):
        return rng.choice(self.r, size=n, p=self.check_params(params))


@dataclass(frozen=True)
class Bernoulli(Multinomial):
    """Binary outcomes; the parameter is the probability of ``1``."""

    r: int = field(default=2, init=False)

    def check_params(self, params):
        theta = float(params) if np.ndim(params) == 0 else None
        if theta is None or not 0.0 <= theta <= 1.0:
            raise InvalidInputError(f"Bernoulli parameter must be a scalar in [0, 1], got {params!r}")
        return theta

    def log_likelihood(self, params, data):
        theta = self.check_params(params)
        n0, n1 = self.sufficient_stats(data).counts
        return float(xlogy(n1, theta) + xlogy(n0, 1.0 - theta))

    def mle(self, data):
        return float(super().mle(data)[1])

    def sample(self, params, n, rng):
        return (rng.random(n) < self.check_params(params)).astype(np.int64)


@dataclass(frozen=True)
class MarkovChain(ModelFamily):
    """Order-``k`` Markov chain over ``r`` symbols.

    The first ``order`` symbols receive probability ``1/r`` each so that chains
    of different order all score the full sequence.
    """

    order: int = 1
    r: int = 2

    def __post_init__(self):
        check_int("order", self.order, minimum=0)
        check_int("r", self.r, minimum=2)

    @property
    def n_contexts(self):
        return self.r**self.order

    @property
    def dim(self):
        return self.n_contexts * (self.r - 1)

    @property
    def arity(self):
        return self.r

    def check_data(self, data):
        return check_categorical(data, self.r)

    def check_params(self, params):
        P = np.asarray(params, dtype=float)
        if self.order == 0 and P.ndim == 1:
            P = P.reshape(1, -1)
        if P.shape != (self.n_contexts, self.r):
            raise InvalidInputError(f"transition matrix must have shape {(self.n_contexts, self.r)}, got {P.shape}")
        if np.any(P < 0) or np.any(P > 1) or np.any(np.abs(P.sum(axis=1) - 1.0) > 1e-9):
            raise InvalidInputError("transition rows must be probability vectors")
        return P

    def sufficient_stats(self, data):
        data = self.check_data(data)
        counts = np.zeros((self.n_contexts, self.r), dtype=np.int64)
        ctx = _contexts(data, self.order, self.r)
        np.add.at(counts, (ctx, data[self.order :]), 1)
        head = tuple(int(s) for s in data[: self.order])
        tail = tuple(int(s) for s in data[len(data) - self.order :]) if self.order and len(data) >= self.order else head
        return TransitionStats(self.order, self.r, head, tail, counts)

    def log_likelihood(self, params, data):
        P = self.check_params(params)
        stats = self.sufficient_stats(data)
        return float(-len(stats.head) * np.log(self.r) + np.sum(xlogy(stats.counts, P)))

    def mle(self, data):
        data = self.check_data(data)
        if data.size == 0:
            raise InvalidInputError("maximum likelihood needs at least one outcome")
        counts = self.sufficient_stats(data).counts.astype(float)
        totals = counts.sum(axis=1, keepdims=True)
        P = np.full_like(counts, 1.0 / self.r)
        seen = totals[:, 0] > 0
        P[seen] = counts[seen] / totals[seen]
        return P

    def sample(self, params, n, rng):
        P = self.check_params(params)
        out = np.empty(n, dtype=np.int64)
        out[: min(n, self.order)] = rng.integers(self.r, size=min(n, self.order))
        u = rng.random(n)
        cum = np.cumsum(P, axis=1)
        for i in range(self.order, n):
            c = _context_of(out[i - self.order : i], self.r)
            out[i] = min(int(np.searchsorted(cum[c], u[i], side="right")), self.r - 1)
        return out


@dataclass(frozen=True)
class GaussianLocation(ModelFamily):
    """Normal outcomes with unknown mean and known variance ``sigma2``."""

    sigma2: float = 1.0
    discrete = False
    dim = 1

    def __post_init__(self):
        check_positive("sigma2", self.sigma2)

    def check_data(self, data):
        return check_real(data)

    def check_params(self, params):
        if np.ndim(params) != 0 or not np.isfinite(params):
            raise InvalidInputError(f"Gaussian mean must be a finite scalar, got {params!r}")
        return float(params)

    def sufficient_stats(self, data):
        z = self.check_data(data)
        return GaussianStats(z.size, float(z.sum()), float(z @ z))

    def log_likelihood(self, params, data):
        mu = self.check_params(params)
        z = self.check_data(data)
        return float(-0.5 * z.size * (LOG_2PI + np.log(self.sigma2)) - np.sum((z - mu) ** 2) / (2 * self.sigma2))

    def mle(self, data):
        z = self.check_data(data)
        if z.size == 0:
            raise InvalidInputError("maximum likelihood needs at least one outcome")
        return float(z.mean())

    def sample(self, params, n, rng):
        return self.check_params(params) + np.sqrt(self.sigma2) * rng.standard_normal(n)


@dataclass(frozen=True)
class LinearRegression(ModelFamily):
    """``y = X beta + N(0, sigma2)`` noise, conditional on the design ``X``."""

    m: int = 1
    sigma2: float = 1.0
    discrete = False

    def __post_init__(self):
        check_int("m", self.m, minimum=1)
        check_positive("sigma2", self.sigma2)

    @property
    def dim(self):
        return self.m

    def check_data(self, data):
        return check_regression(data, self.m)

    def length(self, data):
        return self.check_data(data)[1].size

    def check_params(self, params):
        beta = np.atleast_1d(np.asarray(params, dtype=float))
        if beta.shape != (self.m,):
            raise InvalidInputError(f"expected {self.m} coefficients, got shape {beta.shape}")
        return beta

    def sufficient_stats(self, data):
        X, y = self.check_data(data)
        return GramStats(y.size, X.T @ X, X.T @ y, float(y @ y))

    def log_likelihood(self, params, data):
        beta = self.check_params(params)
        X, y = self.check_data(data)
        rss = float(np.sum((y - X @ beta) ** 2))
        return -0.5 * y.size * (LOG_2PI + np.log(self.sigma2)) - rss / (2 * self.sigma2)

    def mle(self, data):
        X, y = self.check_data(data)
        if y.size == 0:
            raise InvalidInputError("maximum likelihood needs at least one outcome")
        if np.linalg.matrix_rank(X) < self.m:
            raise DegenerateDesignError("XᵀX is singular; restrict the design or use a Gaussian luckiness")
        return np.linalg.solve(X.T @ X, X.T @ y)

    def sample(self, params, n, rng):
        raise NotImplementedError("regression responses need a design; simulate y = X @ beta + noise directly")


@dataclass(frozen=True, eq=False)
class Singleton(ModelFamily):
    """A model containing exactly one distribution, ``base`` at ``params``."""

    base: ModelFamily
    params: object
    dim = 0

    @property
    def discrete(self):
        return self.base.discrete

    @property
    def arity(self):
        return self.base.arity

    def check_data(self, data):
        return self.base.check_data(data)

    def length(self, data):
        return self.base.length(data)

    def sufficient_stats(self, data):
        return self.base.sufficient_stats(data)

    def log_likelihood(self, params, data):
        return self.base.log_likelihood(self.params, data)

    def mle(self, data):
        return self.params

    def sample(self, params, n, rng):
        return self.base.sample(self.params, n, rng)


# ---------------------------------------------------------------------------
# luckiness functions
# ---------------------------------------------------------------------------


class Luckiness:
    """A nonnegative weight ``v`` on the parameter space, evaluated in log form."""

    def log_value(self, family, params):
        raise NotImplementedError


@dataclass(frozen=True)
class Uniform(Luckiness):
    def log_value(self, family, params):
        return 0.0


@dataclass(frozen=True, eq=False)
class GaussianOnCoefficients(Luckiness):
    """``v(beta) = exp(-betaᵀ cov⁻¹ beta / (2 scale))``.

    ``scale`` defaults to the family's noise variance, which makes the MDL
    estimate a ridge solution ``(XᵀX + cov⁻¹)⁻¹ Xᵀy``.
    """

    cov: np.ndarray
    scale: float | None = None

    def __post_init__(self):
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if cov.shape[0] != cov.shape[1] or not np.allclose(cov, cov.T):
            raise InvalidLuckinessError("luckiness covariance must be square and symmetric")
        if cov.size and np.linalg.eigvalsh(cov).min() <= 0:
            raise InvalidLuckinessError("luckiness covariance must be positive definite")
        object.__setattr__(self, "cov", cov)
        if self.scale is not None:
            check_positive("scale", self.scale)

    def scale_for(self, family):
        return float(self.scale) if self.scale is not None else float(family.sigma2)

    def log_value(self, family, params):
        beta = np.atleast_1d(np.asarray(params, dtype=float))
        return float(-beta @ np.linalg.solve(self.cov, beta) / (2 * self.scale_for(family)))


@dataclass(frozen=True, eq=False)
class DiscretizedMass(Luckiness):
    """A probability mass ``weights`` on a finite parameter ``grid``."""

    grid: tuple
    weights: tuple

    def __post_init__(self):
        grid = tuple(self.grid)
        weights = np.asarray(self.weights, dtype=float)
        if len(grid) == 0:
            raise InvalidInputError("discretization grid is empty")
        if weights.shape != (len(grid),):
            raise InvalidInputError("one weight per grid point is required")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
            raise InvalidLuckinessError("grid weights must be nonnegative and sum to 1")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "weights", tuple(float(w) for w in weights))

    @property
    def log_weights(self):
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self.weights))

    def log_value(self, family, params):
        for point, lw in zip(self.grid, self.log_weights):
            if np.array_equal(np.asarray(point), np.asarray(params)):
                return float(lw)
        return -np.inf


@dataclass(frozen=True)
class StartUpData(Luckiness):
    """Luckiness implied by conditioning on the first ``m`` outcomes.

    It only matters to the conditional universal distributions; as a penalty
    it equals the likelihood of the held-out prefix, so the MDL estimate on the
    full sample is the ML estimate.
    """

    m: int = 1

    def __post_init__(self):
        check_int("m", self.m, minimum=0)

    def log_value(self, family, params):
        return 0.0


@dataclass(frozen=True, eq=False)
class CustomLuckiness(Luckiness):
    """Arbitrary ``log v(theta)``; supported by 1-d families (Bernoulli)."""

    log_v: Callable

    def log_value(self, family, params):
        with np.errstate(divide="ignore"):
            return float(self.log_v(params))


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def sufficient_stats(family, data):
    return family.sufficient_stats(data)


def log_likelihood(family, params, data):
    """``log p_theta(data)`` in nats; ``-inf`` when the data has zero probability."""
    return family.log_likelihood(params, data)


def mle(family, data):
    """Maximum-likelihood estimate.

    Raises
    ------
    InvalidInputError
        On empty data.
    DegenerateDesignError
        For a regression design of deficient rank.
    """
    return family.mle(data)


def golden_section_max(f, lo, hi, tol=GOLDEN_TOL):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns the best point found."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    candidates = [(f(lo), lo), (f(hi), hi), (f((a + b) / 2), (a + b) / 2)]
    return max(candidates)[1]


def _ridge(X, y, luck, family):
    scale = luck.scale_for(family)
    if luck.cov.shape != (X.shape[1], X.shape[1]):
        raise InvalidLuckinessError(f"luckiness covariance must be {X.shape[1]}x{X.shape[1]}")
    A = X.T @ X / family.sigma2 + np.linalg.inv(luck.cov) / scale
    return np.linalg.solve(A, X.T @ y / family.sigma2)


def mdl_estimate(family, luckiness, data):
    """Penalized ML estimate ``argmax_theta p_theta(data) v(theta)``."""
    if isinstance(luckiness, (Uniform, StartUpData)) or luckiness is None:
        return family.mle(data)

    if isinstance(luckiness, DiscretizedMass):
        scores = [family.log_likelihood(p, data) + lw for p, lw in zip(luckiness.grid, luckiness.log_weights)]
        if not np.any(np.isfinite(scores)):
            raise InvalidLuckinessError("luckiness vanishes on every grid point with positive likelihood")
        return luckiness.grid[int(np.argmax(scores))]

    if isinstance(luckiness, GaussianOnCoefficients):
        if isinstance(family, LinearRegression):
            X, y = family.check_data(data)
            return _ridge(X, y, luckiness, family)
        if isinstance(family, GaussianLocation):
            z = family.check_data(data)
            return float(_ridge(np.ones((z.size, 1)), z, luckiness, family)[0])
        raise InvalidLuckinessError("Gaussian luckiness applies to Gaussian location and regression only")

    if isinstance(luckiness, CustomLuckiness):
        if not isinstance(family, Bernoulli):
            raise InvalidLuckinessError("custom luckiness functions are supported for the Bernoulli family only")
        n0, n1 = family.sufficient_stats(data).counts

        def objective(theta):
            return float(xlogy(n1, theta) + xlogy(n0, 1.0 - theta)) + luckiness.log_value(family, theta)

        probe = [objective(t) for t in np.linspace(GOLDEN_EPS, 1 - GOLDEN_EPS, 101)]
        if not np.any(np.isfinite(probe)):
            raise InvalidLuckinessError("luckiness function is zero on the whole parameter space")
        return float(golden_section_max(objective, GOLDEN_EPS, 1 - GOLDEN_EPS))

    raise InvalidLuckinessError(f"unsupported luckiness {type(luckiness).__name__}")
