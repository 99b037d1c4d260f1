import itertools
import math

import numpy as np
import pytest
from scipy.special import logsumexp

from mdlkit import (
    BayesMarginal,
    Bernoulli,
    InvalidInputError,
    PointMass,
    SwitchDistribution,
    default_switch_prior,
    switch_log_marginal,
    switch_regret_bound_check,
)


def pair():
    fam = Bernoulli()
    return PointMass(fam, 0.5), BayesMarginal(fam)


def brute_switch(u0, u1, z, mode):
    """Direct mixture over switch points with renormalized or tail-augmented prior."""
    n = len(z)
    pi = np.array([1.0 / (i * (i + 1)) for i in range(1, n + 1)])
    if mode == "renormalize":
        w, never = pi / pi.sum(), 0.0
    else:
        w, never = pi, 1.0 - pi.sum()
    terms = []
    for i in range(1, n + 1):
        head, tail = z[: i - 1], z[i - 1:]
        # u1 restarted at i is u1 conditioned on the history: prefix-difference
        cond = u1.log_prob(z) - (u1.log_prob(head) if len(head) else 0.0)
        terms.append(math.log(w[i - 1]) + (u0.log_prob(head) if len(head) else 0.0) + cond)
    if never > 0:
        terms.append(math.log(never) + u0.log_prob(z))
    return float(logsumexp(terms))


def test_default_prior_sums_to_one():
    i = np.arange(1, 100_001)
    assert default_switch_prior(i).sum() == pytest.approx(1 - 1 / 100_001)


@pytest.mark.parametrize("mode", ["renormalize", "subdistribution"])
def test_matches_direct_mixture(mode):
    u0, u1 = pair()
    sw = SwitchDistribution(u0, u1, mode=mode)
    rng = np.random.default_rng(3)
    for _ in range(20):
        z = rng.integers(0, 2, rng.integers(1, 12))
        assert switch_log_marginal(sw, z) == pytest.approx(brute_switch(u0, u1, z, mode), abs=1e-12)


def test_renormalized_switch_normalizes_and_subdistribution_too():
    u0, u1 = pair()
    for mode in ("renormalize", "subdistribution"):
        sw = SwitchDistribution(u0, u1, mode=mode)
        for n in (1, 3, 6, 9):
            mass = sum(math.exp(sw.log_prob(np.array(s))) for s in itertools.product((0, 1), repeat=n))
            assert mass == pytest.approx(1.0, abs=1e-9)


def test_chain_rule():
    u0, u1 = pair()
    sw = SwitchDistribution(u0, u1)
    z = np.array([0, 1, 1, 1, 1, 1, 0, 1, 1, 1])
    assert -np.sum(sw.log_losses(z)) == pytest.approx(sw.log_prob(z), abs=1e-12)


def test_bound_on_all_strings():
    u0, u1 = pair()
    sw = SwitchDistribution(u0, u1)
    for n in range(1, 9):
        for s in itertools.product((0, 1), repeat=n):
            check = switch_regret_bound_check(sw, np.array(s))
            assert check.holds, (s, check)


def test_tracks_better_code():
    u0, u1 = pair()
    sw = SwitchDistribution(u0, u1)
    rng = np.random.default_rng(0)
    z = np.r_[rng.integers(0, 2, 100), np.ones(200, dtype=int)]
    assert -sw.log_prob(z) <= min(-u0.log_prob(z), -u1.log_prob(z)) + 2 * math.log(z.size)


def test_errors():
    u0, u1 = pair()
    with pytest.raises(InvalidInputError):
        SwitchDistribution(u0, u1, mode="bogus")
    with pytest.raises(InvalidInputError):
        SwitchDistribution(u0, u1).log_prob([])
