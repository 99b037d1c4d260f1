"""MDL model comparison.

A candidate ``γ`` is charged ``-log π(γ) - log ū_γ(z^n)`` nats; the winner is
the shortest total code length.  Ties go to the candidate with the smaller
declared dimension, then to the lexicographically smaller label.
"""
from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from ._validation import check_categorical, check_int, check_positive, check_regression
from .exceptions import InvalidInputError
from .models import MarkovChain
from .universal import BayesMarginal, LNMLRegression, jeffreys_prior

TIE_BREAK = "smaller dimension, then label"
# codelengths closer than this count as tied
TIE_TOL = 1e-9


@dataclass(frozen=True)
class Candidate:
    label: str
    dist: object
    log_prior: float | None = None
    dim: int | None = None

    @property
    def dimension(self):
        if self.dim is not None:
            return self.dim
        family = getattr(self.dist, "family", None)
        return getattr(family, "dim", 0)


@dataclass(frozen=True)
class SelectionRow:
    label: str
    codelength: float  # nats
    weight: float  # exp(-codelength), normalized over the table
    rank: int
    dim: int


@dataclass(frozen=True)
class SelectionResult:
    table: list
    winner: str
    tie_break: str = TIE_BREAK
    tied: tuple = field(default=())

    @property
    def best(self):
        return self.table[0]

    def codelength(self, label):
        for row in self.table:
            if row.label == label:
                return row.codelength
        raise KeyError(label)

    def to_dict(self, bits=False):
        scale = 1.0 / math.log(2.0) if bits else 1.0
        unit = "bits" if bits else "nats"
        return {
            "candidates": [
                {"label": row.label, f"codelength_{unit}": row.codelength * scale, "rank": row.rank, "weight": row.weight}
                for row in self.table
            ],
            "winner": self.winner,
            "tie_break": self.tie_break,
            "unit": unit,
        }


def _rank(labels, lengths, dims):
    lengths = np.asarray(lengths, dtype=float)
    with np.errstate(invalid="ignore"):
        weights = np.exp(-(lengths - lengths.min())) if np.isfinite(lengths.min()) else np.zeros(lengths.size)
    if weights.sum() > 0:
        weights = weights / weights.sum()
    best = lengths.min()
    # round tied lengths together so the dimension/label tie-break applies
    keyed = [
        (best if abs(length - best) <= TIE_TOL else length, dim, label, length, w)
        for label, length, dim, w in zip(labels, lengths, dims, weights)
    ]
    keyed.sort(key=lambda t: (t[0], t[1], t[2]))
    table = [SelectionRow(label, float(length), float(w), rank, int(dim)) for rank, (_, dim, label, length, w) in enumerate(keyed, start=1)]
    tied = tuple(row.label for row in table if abs(row.codelength - best) <= TIE_TOL)
    return SelectionResult(table, table[0].label, TIE_BREAK, tied if len(tied) > 1 else ())


def select(candidates, data, threads=None):
    """Rank candidates by total code length ``-log π(γ) - log ū_γ(data)``.

    Candidates without a ``log_prior`` get the uniform prior over the list.
    ``threads`` evaluates candidates concurrently; the result is identical.
    """
    candidates = list(candidates)
    if not candidates:
        raise InvalidInputError("no candidates to select from")
    labels = [c.label for c in candidates]
    if len(set(labels)) != len(labels):
        raise InvalidInputError("candidate labels must be unique")
    uniform = -math.log(len(candidates))
    priors = [uniform if c.log_prior is None else float(c.log_prior) for c in candidates]
    declared = [c.log_prior for c in candidates if c.log_prior is not None]
    if declared and logsumexp(declared) > 1e-9:
        warnings.warn("candidate prior masses sum to more than one", stacklevel=2)

    def evaluate(c):
        return -c.dist.log_prob(data)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            code = list(pool.map(evaluate, candidates))
    else:
        code = [evaluate(c) for c in candidates]
    lengths = [length - lp for length, lp in zip(code, priors)]
    return _rank(labels, lengths, [c.dimension for c in candidates])


def gamma_code_length(m, k):
    """``log(m+1) + log C(m, k)``: uniform code for ``k``, then for the subset."""
    m = check_int("m", m, minimum=0)
    k = check_int("k", k, minimum=0)
    if k > m:
        raise InvalidInputError(f"cannot choose {k} of {m} covariates")
    return float(math.log(m + 1) + gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1))


def subset_codelength(X, y, subset, sigma2, c=1.0):
    """Total code length of ``y`` using the covariates in ``subset``.

    Gaussian-luckiness NML of the restricted design (covariance ``c·I``) plus
    the subset code length.
    """
    subset = tuple(sorted(subset))
    code = LNMLRegression(len(subset), sigma2, c * np.eye(len(subset)))
    return -code.log_prob((X[:, list(subset)], y)) + gamma_code_length(X.shape[1], len(subset))


def _subset_label(subset):
    return "{" + ",".join(str(j) for j in sorted(subset)) + "}"


def variable_select(X, y, sigma2, c=1.0, strategy="exhaustive", threads=None):
    """MDL variable selection for linear regression with known noise variance.

    ``strategy="exhaustive"`` scores all ``2^m`` subsets (``m <= 20``);
    ``"greedy-forward"`` adds the best column while the code length decreases.
    Returns a :class:`SelectionResult` whose labels are ``"{0,3}"``-style
    column sets (0-based).
    """
    X, y = check_regression((X, y))
    sigma2 = check_positive("sigma2", sigma2)
    c = check_positive("c", c)
    m = X.shape[1]

    def score(subset):
        return subset_codelength(X, y, subset, sigma2, c)

    if strategy == "exhaustive":
        if m > 20:
            raise InvalidInputError("exhaustive search is limited to m <= 20; use strategy='greedy-forward'")
        subsets = [s for k in range(m + 1) for s in itertools.combinations(range(m), k)]
        if threads and threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                lengths = list(pool.map(score, subsets))
        else:
            lengths = [score(s) for s in subsets]
    elif strategy == "greedy-forward":
        current = ()
        best = score(current)
        subsets, lengths = [current], [best]
        while len(current) < m:
            trials = [tuple(sorted(current + (j,))) for j in range(m) if j not in current]
            trial_lengths = [score(s) for s in trials]
            subsets += trials
            lengths += trial_lengths
            j = int(np.argmin(trial_lengths))
            if trial_lengths[j] >= best:
                break
            current, best = trials[j], trial_lengths[j]
    else:
        raise InvalidInputError(f"unknown strategy {strategy!r}")
    return _rank([_subset_label(s) for s in subsets], lengths, [len(s) for s in subsets])


def parse_subset(label):
    inner = label.strip("{}")
    return tuple(int(t) for t in inner.split(",")) if inner else ()


def markov_order_select(data, max_order, r=None):
    """Choose a Markov order by per-context Jeffreys Bayes code length.

    Candidates are orders ``0..max_order`` under the uniform prior.
    """
    max_order = check_int("max_order", max_order, minimum=0)
    data = np.asarray(data)
    if r is None:
        r = int(data.max()) + 1 if data.size else 1
    data = check_categorical(data, max(r, 1))
    if r < 2:
        only = Candidate("order=0", _ConstantCode(), dim=0)
        return select([only], data)
    n = data.size
    if n and max_order * math.log(r) > 0.5 * math.log(max(n, 2)):
        warnings.warn(f"max_order={max_order} is large for n={n}; high orders are barely estimable", stacklevel=2)
    candidates = []
    for k in range(max_order + 1):
        family = MarkovChain(k, r)
        candidates.append(Candidate(f"order={k}", BayesMarginal(family, jeffreys_prior(family)), dim=family.dim))
    return select(candidates, data)


class _ConstantCode:
    """Code for a one-letter alphabet: every sequence has probability one."""

    family = None

    def log_prob(self, data):
        return 0.0
