"""MDL hypothesis tests against a simple null.

Evidence is the code-length difference ``D = -log ū1(z^n) + log p0(z^n)``
(nats).  The likelihood ratio ``p0/ū1 = exp(D)`` is a conservative p-value:
under ``p0``, ``P(p0/ū1 <= α) <= α`` for every ``α``, equivalently
``P(D <= -K) <= exp(-K)``.  Ratios from independent batches multiply.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import check_int
from .exceptions import InvalidInputError, UnsupportedCompositeError
from .models import ModelFamily, Singleton
from .universal import PointMass, UniversalDistribution

DEFAULT_BLOCK = 1000


@dataclass(frozen=True)
class EvidenceReport:
    D: float
    n: int = 0
    batches: int = 1
    mode: str = "single"

    @property
    def ratio(self):
        """``p0(z^n) / ū1(z^n)``."""
        return math.exp(self.D) if self.D < 700 else math.inf

    @property
    def p_value(self):
        return min(self.ratio, 1.0)

    def reject(self, alpha):
        return self.p_value <= alpha

    def to_dict(self, alpha=None):
        out = {"D_nats": self.D, "ratio": self.ratio, "p_conservative": self.p_value, "n": self.n, "batches": self.batches, "mode": self.mode}
        if alpha is not None:
            out["alpha"] = alpha
            out["decision"] = "reject" if self.reject(alpha) else "retain"
        return out


IDENTITY = EvidenceReport(0.0, 0, 0, "identity")


def as_simple_null(p0):
    """Coerce ``p0`` to a :class:`PointMass`; composite nulls are refused."""
    if isinstance(p0, PointMass):
        return p0
    if isinstance(p0, tuple) and len(p0) == 2 and isinstance(p0[0], ModelFamily):
        return PointMass(*p0)
    if isinstance(p0, Singleton):
        return PointMass(p0.base, p0.params)
    if isinstance(p0, (ModelFamily, UniversalDistribution)):
        raise UnsupportedCompositeError(
            "composite nulls need the reverse information projection of ū1 onto the null's Bayes mixtures; "
            "only simple (point) nulls are supported"
        )
    raise InvalidInputError(f"cannot interpret {p0!r} as a simple null")


def evidence(p0, u1, data):
    """Code-length difference of ``u1`` versus the simple null ``p0``."""
    p0 = as_simple_null(p0)
    n = p0.family.length(data)
    if n == 0:
        return EvidenceReport(0.0, 0)
    return EvidenceReport(float(-u1.log_prob(data) + p0.log_prob(data)), n)


def combine(reports):
    """Multiply likelihood ratios (add ``D``) across independent batches."""
    reports = list(reports)
    if not reports:
        return IDENTITY
    return EvidenceReport(
        float(sum(r.D for r in reports)),
        sum(r.n for r in reports),
        sum(r.batches for r in reports),
        "restart" if len(reports) > 1 else reports[0].mode,
    )


def sequential_evidence(p0, u1, batches, mode="restart"):
    """Evidence over successive batches under optional continuation.

    ``mode="restart"`` scores every batch with a fresh ``u1``;
    ``mode="condition"`` lets ``u1`` condition on all earlier batches.  Both
    keep the Type-I guarantee for a simple null; the mode is recorded.
    """
    p0 = as_simple_null(p0)
    batches = [p0.family.check_data(b) for b in batches]
    if mode == "restart":
        out = combine(evidence(p0, u1, b) for b in batches)
        return EvidenceReport(out.D, out.n, out.batches, "restart")
    if mode != "condition":
        raise InvalidInputError(f"unknown continuation mode {mode!r}")
    if not batches:
        return IDENTITY
    data = np.concatenate(batches)
    return EvidenceReport(float(-u1.log_prob(data) + p0.log_prob(data)), data.size, len(batches), "condition")


def _simulate_block(p0, u1, n, rng, size):
    D = np.empty(size)
    for t in range(size):
        z = p0.sample(n, rng)
        D[t] = -u1.log_prob(z) + p0.log_prob(z)
    return D


def simulate_evidence(p0, u1, n, trials, seed=0, block_size=DEFAULT_BLOCK, threads=None):
    """``D`` for ``trials`` datasets of length ``n`` drawn from ``p0``.

    Trials are split into blocks of ``block_size``, each with its own child
    seed of ``seed``, so results depend only on ``(seed, trials, block_size)``.
    """
    p0 = as_simple_null(p0)
    n = check_int("n", n, minimum=1)
    trials = check_int("trials", trials, minimum=1)
    sizes = [min(block_size, trials - s) for s in range(0, trials, block_size)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(np.random.default_rng(s), size) for s, size in zip(seeds, sizes)]
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _simulate_block(p0, u1, n, *job), jobs))
    else:
        parts = [_simulate_block(p0, u1, n, *job) for job in jobs]
    return np.concatenate(parts)


@dataclass(frozen=True)
class Type1Result:
    rate: float
    alpha: float
    trials: int
    n: int
    bound: float  # alpha + 3 standard errors

    @property
    def within_bound(self):
        return self.rate <= self.bound

    def to_dict(self):
        return {"rate": self.rate, "alpha": self.alpha, "trials": self.trials, "n": self.n, "bound": self.bound, "within_bound": self.within_bound}


def type1_simulate(p0, u1, alpha, n, trials=10_000, seed=0, block_size=DEFAULT_BLOCK, threads=None):
    """Empirical rejection rate of the ``p <= alpha`` test under the null."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidInputError(f"alpha must lie in [0, 1], got {alpha}")
    trials = check_int("trials", trials, minimum=1000)
    D = simulate_evidence(p0, u1, n, trials, seed, block_size, threads)
    with np.errstate(over="ignore"):
        p = np.minimum(np.exp(D), 1.0)
    rate = float(np.mean(p <= alpha))
    bound = alpha + 3.0 * math.sqrt(alpha * (1.0 - alpha) / trials)
    return Type1Result(rate, float(alpha), trials, n, bound)
