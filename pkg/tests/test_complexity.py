import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from mdlkit import (
    ComplexityDivergesError,
    InvalidInputError,
    InvalidLuckinessError,
    Method,
    comp_asymptotic,
    comp_bernoulli,
    comp_bernoulli_exact,
    comp_markov,
    comp_multinomial_exact,
    comp_multinomial_szpankowski,
    jeffreys_integral_multinomial,
)
from mdlkit.models import CustomLuckiness, DiscretizedMass, GaussianOnCoefficients, StartUpData


def enumerate_comp(n, r):
    """log of sum over all r^n sequences of the maximized likelihood."""
    total = 0.0
    for seq in itertools.product(range(r), repeat=n):
        counts = np.bincount(seq, minlength=r)
        total += math.prod((c / n) ** c for c in counts if c)
    return math.log(total)


def enumerate_markov(n, r):
    """First-order Markov normalizer with the first symbol coded uniformly."""
    total = 0.0
    for seq in itertools.product(range(r), repeat=n):
        trans = np.zeros((r, r))
        for a, b in zip(seq, seq[1:]):
            trans[a, b] += 1
        lik = 1.0 / r
        for row in trans:
            s = row.sum()
            lik *= math.prod((c / s) ** c for c in row if c)
        total += lik
    return math.log(total)


@pytest.mark.parametrize("n,r", [(n, r) for r in range(2, 6) for n in range(1, 13) if r**n <= 250_000])
def test_multinomial_matches_enumeration(n, r):
    assert comp_multinomial_exact(n, r).nats == pytest.approx(enumerate_comp(n, r), abs=1e-10)


@pytest.mark.parametrize("n", range(0, 13))
def test_bernoulli_exact_matches_enumeration(n):
    expected = 0.0 if n == 0 else enumerate_comp(n, 2)
    assert comp_bernoulli_exact(n).nats == pytest.approx(expected, abs=1e-12)


def test_small_normalizers():
    assert math.exp(comp_bernoulli_exact(1).nats) == pytest.approx(2.0, abs=1e-12)
    assert math.exp(comp_bernoulli_exact(2).nats) == pytest.approx(2.5, abs=1e-12)
    assert math.exp(comp_bernoulli_exact(3).nats) == pytest.approx(78 / 27, abs=1e-12)


def test_trivial_cases():
    assert comp_multinomial_exact(10, 1).nats == 0.0
    assert comp_multinomial_exact(0, 7).nats == 0.0
    with pytest.raises(InvalidInputError):
        comp_multinomial_exact(-1, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 400), st.integers(2, 30))
def test_recurrence_agrees_with_bernoulli_sum_and_increases(n, r):
    value = comp_multinomial_exact(n, r).nats
    assert value < comp_multinomial_exact(n + 1, r).nats
    assert value < comp_multinomial_exact(n, r + 1).nats
    if r == 2:
        assert value == pytest.approx(comp_bernoulli_exact(n).nats, abs=1e-9)


def test_large_recurrence_is_finite():
    v = comp_multinomial_exact(5000, 200)
    assert math.isfinite(v.nats) and v.method == Method.RECURRENCE


def test_bits_conversion():
    v = comp_bernoulli_exact(2)
    assert v.bits == pytest.approx(math.log2(2.5))
    assert float(v) == v.nats


# tolerances measured against the recurrence: |diff| = 0.0037, 0.0018, 0.086
SZPANKOWSKI_CASES = [(100, 50, 0.1), (1000, 100, 0.1), (100, 2, 0.5)]


@pytest.mark.parametrize("n,r,tol", SZPANKOWSKI_CASES)
def test_szpankowski_close_to_exact(n, r, tol):
    diff = comp_multinomial_szpankowski(n, r).nats - comp_multinomial_exact(n, r).nats
    assert abs(diff) <= tol


@pytest.mark.parametrize("r", [2, 3])
def test_jeffreys_integral_by_quadrature_and_monte_carlo(r):
    fi = jeffreys_integral_multinomial(r)
    if r == 2:
        val, _ = integrate.quad(lambda t: 1 / math.sqrt(t * (1 - t)), 0, 1)
        assert math.log(val) == pytest.approx(math.log(fi.value), abs=1e-6)
    # sqrt|I| = prod theta_j^{-1/2} on the simplex; sample the Dirichlet(1/2) density
    rng = np.random.default_rng(r)
    theta = rng.dirichlet(np.ones(r), size=400_000)
    # uniform on simplex has density (r-1)!; integral = E[prod theta^-1/2] / (r-1)!
    est = np.mean(np.prod(theta ** -0.5, axis=1)) / math.factorial(r - 1)
    assert math.log(est) == pytest.approx(math.log(fi.value), abs=0.05)


def test_asymptotic_error_decreases_for_bernoulli():
    fi = jeffreys_integral_multinomial(2)
    errs = [abs(comp_bernoulli_exact(n).nats - comp_asymptotic(1, n, fi).nats) for n in (100, 1000, 10_000)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.05


def test_asymptotic_multinomial():
    fi = jeffreys_integral_multinomial(3)
    err = abs(comp_multinomial_exact(10_000, 3).nats - comp_asymptotic(2, 10_000, fi).nats)
    assert err < 0.05


@pytest.mark.parametrize("n", range(2, 11))
def test_markov_binary_order_one(n):
    assert comp_markov(n, 1, 2).nats == pytest.approx(enumerate_markov(n, 2), abs=1e-10)


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_markov_ternary_enumeration(n):
    assert comp_markov(n, 1, 3).nats == pytest.approx(enumerate_markov(n, 3), abs=1e-10)


def test_markov_order_zero_is_multinomial():
    assert comp_markov(30, 0, 3).nats == pytest.approx(comp_multinomial_exact(30, 3).nats)


def test_markov_large_falls_back():
    v = comp_markov(100_000, 2, 3)
    assert v.method == Method.ASYMPTOTIC and math.isfinite(v.nats)


def test_bernoulli_luckiness_variants():
    n = 6
    assert comp_bernoulli(n).nats == pytest.approx(comp_bernoulli_exact(n).nats)
    # discretized mass: sum over sequences of max_j w_j p_j(z)
    grid, w = (0.2, 0.5, 0.8), (0.25, 0.5, 0.25)
    total = sum(
        max(wj * p ** sum(s) * (1 - p) ** (n - sum(s)) for p, wj in zip(grid, w))
        for s in itertools.product((0, 1), repeat=n)
    )
    assert comp_bernoulli(n, DiscretizedMass(grid, w)).nats == pytest.approx(math.log(total), abs=1e-12)
    assert comp_bernoulli(n, DiscretizedMass(grid, w)).nats < 0
    # custom luckiness theta(1-theta): penalized max on a fine grid
    lv = CustomLuckiness(lambda t: math.log(t * (1 - t)))
    thetas = np.linspace(1e-6, 1 - 1e-6, 200_001)
    total = 0.0
    for k in range(n + 1):
        total += math.comb(n, k) * np.max(thetas ** (k + 1) * (1 - thetas) ** (n - k + 1))
    assert comp_bernoulli(n, lv).nats == pytest.approx(math.log(total), abs=1e-6)


def test_bernoulli_rejects_unsupported_luckiness():
    with pytest.raises((InvalidLuckinessError, InvalidInputError, ComplexityDivergesError)):
        comp_bernoulli(5, GaussianOnCoefficients(np.eye(1)))
    with pytest.raises(InvalidLuckinessError):
        comp_bernoulli(5, CustomLuckiness(lambda t: -math.inf))
    # start-up data is a conditioning scheme, not a luckiness for the normalizer
    with pytest.raises(InvalidLuckinessError):
        comp_bernoulli(5, StartUpData(1))
