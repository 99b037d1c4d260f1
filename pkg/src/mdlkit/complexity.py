"""Parametric complexity ``COMP(M, v)``: the log-normalizer of NML.

Exact values come from direct summation (Bernoulli), the linear-time
multinomial recurrence, or enumeration (Markov chains); approximate values
from Szpankowski's formula or the classical ``k/2 log n`` expansion.
"""
from __future__ import annotations

import enum
import itertools
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from ._validation import check_int
from .exceptions import InvalidInputError, InvalidLuckinessError
from .models import Bernoulli, CustomLuckiness, DiscretizedMass, Uniform, golden_section_max, GOLDEN_EPS

# Markov normalizers by brute-force enumeration stop at this many sequences.
MAX_ENUMERATED_SEQUENCES = 1 << 20
# Vectorized exact normalizer for binary first-order chains up to this length.
MAX_BINARY_MARKOV_N = 2048


class Method(str, enum.Enum):
    EXACT_SUM = "exact-sum"
    RECURRENCE = "recurrence"
    ENUMERATION = "enumeration"
    SZPANKOWSKI = "szpankowski"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class ComplexityValue:
    """A complexity figure in nats together with how it was obtained."""

    nats: float
    method: Method
    n: int
    family: str

    def __float__(self):
        return self.nats

    @property
    def bits(self):
        return self.nats / np.log(2.0)


@dataclass(frozen=True)
class FisherIntegral:
    """``∫ sqrt(det I(theta)) dtheta`` over the parameter space."""

    value: float
    tag: str = "closed-form"

    def __post_init__(self):
        if not (np.isfinite(self.value) and self.value > 0):
            raise InvalidInputError("Fisher integral must be positive and finite")


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


@lru_cache(maxsize=None)
def _log_bernoulli_normalizer(n):
    if n == 0:
        return 0.0
    h = np.arange(n + 1, dtype=float)
    terms = _log_binom(n, h) + xlogy(h, h / n) + xlogy(n - h, (n - h) / n)
    return float(logsumexp(terms))


def comp_bernoulli_exact(n):
    """``log sum_{n1} C(n, n1) (n1/n)^n1 (n0/n)^n0``, with ``0^0 = 1``."""
    n = check_int("n", n, minimum=0)
    return ComplexityValue(_log_bernoulli_normalizer(n), Method.EXACT_SUM, n, "bernoulli")


class _RecurrenceTable:
    """Append-only table of ``log C(n, r)`` rows, grown on demand.

    Readers never observe a partially written row: a longer row replaces the
    old one in a single dict assignment under the lock.
    """

    def __init__(self):
        self._rows = {}
        self._lock = threading.Lock()

    def get(self, n, r):
        row = self._rows.get(n)
        if row is not None and len(row) >= r:
            return float(row[r - 1])
        with self._lock:
            row = self._rows.get(n)
            if row is None or len(row) < r:
                row = self._extend(n, row, r)
                self._rows[n] = row
        return float(row[r - 1])

    @staticmethod
    def _extend(n, row, r):
        # log C(n, 1) = 0, log C(n, 2) = Bernoulli normalizer,
        # C(n, k) = C(n, k-1) + n/(k-2) C(n, k-2), carried in log space.
        values = [0.0, _log_bernoulli_normalizer(n)] if row is None else list(row)
        target = max(r, 2)
        while len(values) < target:
            k = len(values) + 1
            prev1, prev2 = values[-1], values[-2]
            values.append(prev1 + np.log1p(n / (k - 2) * np.exp(prev2 - prev1)))
        return np.asarray(values)


_TABLE = _RecurrenceTable()


def comp_multinomial_exact(n, r):
    """Exact multinomial complexity via the linear-time recurrence in ``r``."""
    n = check_int("n", n, minimum=0)
    r = check_int("r", r, minimum=1)
    if n == 0 or r == 1:
        return ComplexityValue(0.0, Method.RECURRENCE, n, f"multinomial(r={r})")
    return ComplexityValue(_TABLE.get(n, r), Method.RECURRENCE, n, f"multinomial(r={r})")


def comp_multinomial_szpankowski(n, r):
    """Szpankowski-Weinberger approximation, accurate across ``r/n`` regimes."""
    n = check_int("n", n, minimum=1)
    r = check_int("r", r, minimum=2)
    alpha = r / n
    c_alpha = 0.5 + 0.5 * np.sqrt(1.0 + 4.0 / alpha)
    nats = n * (np.log(alpha) + (alpha + 2.0) * np.log(c_alpha) - 1.0 / c_alpha) - 0.5 * np.log(c_alpha + 2.0 / alpha)
    return ComplexityValue(float(nats), Method.SZPANKOWSKI, n, f"multinomial(r={r})")


def jeffreys_integral_multinomial(r):
    """``∫ sqrt(det I)`` over the ``(r-1)``-simplex: ``pi^(r/2) / Gamma(r/2)``."""
    r = check_int("r", r, minimum=2)
    return FisherIntegral(float(np.exp(0.5 * r * np.log(np.pi) - gammaln(0.5 * r))))


def comp_asymptotic(k, n, fisher_integral, family="regular"):
    """``k/2 log(n / 2pi) + log ∫ sqrt(det I)``, remainder dropped."""
    k = check_int("k", k, minimum=1)
    if not n >= 2:
        raise InvalidInputError(f"n must be >= 2, got {n}")
    value = fisher_integral.value if isinstance(fisher_integral, FisherIntegral) else float(fisher_integral)
    nats = 0.5 * k * np.log(n / (2.0 * np.pi)) + np.log(FisherIntegral(value).value)
    return ComplexityValue(float(nats), Method.ASYMPTOTIC, int(n) if float(n).is_integer() else n, family)


def bernoulli_penalized_maxima(n1, n0, luckiness):
    """``max_theta [n1 log theta + n0 log(1-theta) + log v(theta)]`` per count pair."""
    n1 = np.atleast_1d(np.asarray(n1, dtype=float))
    n0 = np.atleast_1d(np.asarray(n0, dtype=float))
    if luckiness is None or isinstance(luckiness, Uniform):
        tot = n0 + n1
        safe = np.where(tot > 0, tot, 1.0)
        return xlogy(n1, n1 / safe) + xlogy(n0, n0 / safe)
    if isinstance(luckiness, DiscretizedMass):
        grid = np.asarray(luckiness.grid, dtype=float)
        scores = xlogy(n1[:, None], grid[None, :]) + xlogy(n0[:, None], 1.0 - grid[None, :]) + luckiness.log_weights
        return scores.max(axis=1)
    if isinstance(luckiness, CustomLuckiness):
        family = Bernoulli()
        best = np.empty(n1.size)
        for i, (a, b) in enumerate(zip(n1, n0)):

            def objective(theta, a=a, b=b):
                return float(xlogy(a, theta) + xlogy(b, 1 - theta)) + luckiness.log_value(family, theta)

            best[i] = objective(golden_section_max(objective, GOLDEN_EPS, 1 - GOLDEN_EPS))
        return best
    raise InvalidLuckinessError(f"unsupported luckiness {type(luckiness).__name__} for the Bernoulli family")


def comp_bernoulli(n, luckiness=None):
    """Bernoulli complexity for an arbitrary luckiness function.

    ``log sum_{n1} C(n, n1) max_theta theta^n1 (1-theta)^n0 v(theta)``; the
    inner maximum is over the grid for a discretized mass, and by golden-section
    search for a custom ``log v``.
    """
    n = check_int("n", n, minimum=0)
    if luckiness is None or isinstance(luckiness, Uniform):
        return comp_bernoulli_exact(n)
    h = np.arange(n + 1, dtype=float)
    best = bernoulli_penalized_maxima(h, n - h, luckiness)
    if not np.any(np.isfinite(best)):
        raise InvalidLuckinessError("luckiness function is zero on the whole parameter space")
    return ComplexityValue(float(logsumexp(_log_binom(n, h) + best)), Method.EXACT_SUM, n, "bernoulli(luckiness)")


# ---------------------------------------------------------------------------
# Markov chains
# ---------------------------------------------------------------------------


def _markov_log_ml(sequences, order, r):
    """Row-wise maximized log-likelihood (conditional part) of many sequences."""
    n_seq, n = sequences.shape
    n_ctx = r**order
    counts = np.zeros((n_seq, n_ctx * r), dtype=np.int64)
    rows = np.arange(n_seq)
    for i in range(order, n):
        ctx = np.zeros(n_seq, dtype=np.int64)
        for j in range(order, 0, -1):
            ctx = ctx * r + sequences[:, i - j]
        counts[rows, ctx * r + sequences[:, i]] += 1
    counts = counts.reshape(n_seq, n_ctx, r).astype(float)
    totals = counts.sum(axis=2, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        probs = np.where(totals > 0, counts / np.where(totals > 0, totals, 1.0), 0.0)
    return np.sum(xlogy(counts, probs), axis=(1, 2))


def _markov_enumerate(n, order, r):
    seqs = np.array(list(itertools.product(range(r), repeat=n)), dtype=np.int64).reshape(-1, n)
    return float(logsumexp(_markov_log_ml(seqs, order, r)) - order * np.log(r))


def _binary_markov_whittle(n):
    """Exact normalizer of the binary first-order chain, first symbol uniform.

    Counts sequences per transition-count matrix with Whittle's formula and
    sums their maximized likelihoods.
    """
    if n <= 1:
        return 0.0
    t = n - 1
    pieces = []
    for u in (0, 1):
        for a in range(t + 1):  # a = N01
            for delta in (-1, 0, 1):  # N01 - N10 = delta fixes the end state
                b = a - delta  # b = N10
                if b < 0 or a + b > t:
                    continue
                if u == 0 and delta == -1 or u == 1 and delta == 1:
                    continue
                v = u if delta == 0 else 1 - u
                c = np.arange(t - a - b + 1, dtype=float)  # c = N00
                d = t - a - b - c  # N11
                n0 = c + a
                n1 = b + d
                with np.errstate(divide="ignore", invalid="ignore"):
                    f00 = np.where(n0 > 0, a / np.where(n0 > 0, n0, 1), 1.0)
                    f01 = np.where(n0 > 0, -a / np.where(n0 > 0, n0, 1), 0.0)
                    f10 = np.where(n1 > 0, -b / np.where(n1 > 0, n1, 1), 0.0)
                    f11 = np.where(n1 > 0, b / np.where(n1 > 0, n1, 1), 1.0)
                cof = {(0, 0): f11, (1, 1): f00, (0, 1): -f10, (1, 0): -f01}[(v, u)]
                with np.errstate(divide="ignore"):
                    log_count = _log_binom(n0, c) + _log_binom(n1, b) + np.log(cof)
                log_ml = (
                    xlogy(c, c / np.maximum(n0, 1))
                    + xlogy(a, a / np.maximum(n0, 1))
                    + xlogy(b, b / np.maximum(n1, 1))
                    + xlogy(d, d / np.maximum(n1, 1))
                )
                pieces.append(log_count + log_ml)
    return float(logsumexp(np.concatenate(pieces)) - np.log(2.0))


@lru_cache(maxsize=None)
def _comp_markov_cached(n, order, r):
    name = f"markov(order={order}, r={r})"
    if n <= order:
        return ComplexityValue(0.0, Method.EXACT_SUM, n, name)
    if order == 1 and r == 2 and n <= MAX_BINARY_MARKOV_N:
        return ComplexityValue(_binary_markov_whittle(n), Method.EXACT_SUM, n, name)
    if r**n <= MAX_ENUMERATED_SEQUENCES:
        return ComplexityValue(_markov_enumerate(n, order, r), Method.ENUMERATION, n, name)
    n_ctx = r**order
    per_context = max(n / n_ctx, 2.0)
    nats = n_ctx * comp_asymptotic(r - 1, per_context, jeffreys_integral_multinomial(r)).nats
    return ComplexityValue(float(nats), Method.ASYMPTOTIC, n, name)


def comp_markov(n, order, r=2):
    """Complexity of an order-``k`` chain whose first ``k`` symbols are uniform.

    Exact by sequence enumeration when ``r**n`` is small, by Whittle's formula
    for binary first-order chains up to ``n = 2048``; otherwise the asymptotic
    value treating each context as receiving ``n / r**k`` outcomes.
    """
    n = check_int("n", n, minimum=0)
    order = check_int("order", order, minimum=0)
    r = check_int("r", r, minimum=2)
    if order == 0:
        v = comp_multinomial_exact(n, r)
        return ComplexityValue(v.nats, v.method, n, f"markov(order=0, r={r})")
    return _comp_markov_cached(n, order, r)
