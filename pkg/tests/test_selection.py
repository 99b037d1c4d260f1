import math
import warnings

import numpy as np
import pytest
from scipy import stats

from mdlkit import (
    NML,
    BayesMarginal,
    Bernoulli,
    Candidate,
    InvalidInputError,
    MarkovChain,
    PointMass,
    gamma_code_length,
    jeffreys_prior,
    markov_order_select,
    parse_subset,
    select,
    subset_codelength,
    variable_select,
)


def test_select_ranks_by_codelength():
    fam = Bernoulli()
    z = [1] * 30
    res = select([Candidate("fair", PointMass(fam, 0.5)), Candidate("nml", NML(fam))], z)
    assert res.winner == "nml"
    assert [row.rank for row in res.table] == [1, 2]
    assert sum(row.weight for row in res.table) == pytest.approx(1.0)
    assert res.codelength("fair") == pytest.approx(30 * math.log(2) + math.log(2))


def test_tie_break_by_dimension_then_label():
    fam = Bernoulli()
    a = Candidate("b", PointMass(fam, 0.5), dim=1)
    b = Candidate("a", PointMass(fam, 0.5), dim=1)
    c = Candidate("c", PointMass(fam, 0.5), dim=0)
    res = select([a, b, c], [0, 1])
    assert res.winner == "c"
    assert res.tied
    res = select([a, b], [0, 1])
    assert res.winner == "a"


def test_declared_priors():
    fam = Bernoulli()
    res = select(
        [Candidate("x", PointMass(fam, 0.5), log_prior=math.log(0.9)), Candidate("y", PointMass(fam, 0.5), log_prior=math.log(0.1))],
        [0, 1, 1],
    )
    assert res.winner == "x"
    with pytest.warns(UserWarning):
        select([Candidate("x", PointMass(fam, 0.5), log_prior=0.0), Candidate("y", PointMass(fam, 0.5), log_prior=0.0)], [0])


def test_select_errors():
    with pytest.raises(InvalidInputError):
        select([], [0])
    fam = Bernoulli()
    with pytest.raises(InvalidInputError):
        select([Candidate("x", PointMass(fam, 0.5)), Candidate("x", NML(fam))], [0])


def test_threads_do_not_change_result():
    rng = np.random.default_rng(0)
    z = rng.integers(0, 2, 300)
    cands = [Candidate(f"markov{k}", BayesMarginal(MarkovChain(k, 2))) for k in range(4)]
    assert select(cands, z).to_dict() == select(cands, z, threads=4).to_dict()


def test_gamma_code_length():
    assert gamma_code_length(5, 2) == pytest.approx(math.log(6) + math.log(10))
    assert gamma_code_length(0, 0) == 0.0
    with pytest.raises(InvalidInputError):
        gamma_code_length(2, 3)


def test_subset_codelength_matches_marginal():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(25, 3))
    y = rng.normal(size=25)
    sigma2, c = 0.7, 2.0
    Xs = X[:, [0, 2]]
    marginal = stats.multivariate_normal(np.zeros(25), sigma2 * (np.eye(25) + c * Xs @ Xs.T)).logpdf(y)
    expected = -marginal + gamma_code_length(3, 2)
    assert subset_codelength(X, y, (2, 0), sigma2, c) == pytest.approx(expected)


def test_variable_select_recovers_signal():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(200, 5))
    y = 1.5 * X[:, 3] - 1.0 * X[:, 0] + rng.normal(size=200)
    res = variable_select(X, y, 1.0)
    assert parse_subset(res.winner) == (0, 3)
    assert len(res.table) == 32
    greedy = variable_select(X, y, 1.0, strategy="greedy-forward")
    assert greedy.winner == res.winner


def test_variable_select_threads_identical():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(50, 4))
    y = X[:, 1] + rng.normal(size=50)
    assert variable_select(X, y, 1.0).to_dict() == variable_select(X, y, 1.0, threads=3).to_dict()


def test_parse_subset():
    assert parse_subset("{}") == ()
    assert parse_subset("{0,12}") == (0, 12)


def test_markov_order_select():
    rng = np.random.default_rng(4)
    fam = MarkovChain(2, 2)
    P = np.array([[0.9, 0.1], [0.2, 0.8], [0.7, 0.3], [0.05, 0.95]])
    z = fam.sample(P, 2000, rng)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = markov_order_select(z, 3)
    assert res.winner == "order=2"
    expected = BayesMarginal(fam, jeffreys_prior(fam)).log_prob(z)
    assert res.codelength("order=2") == pytest.approx(-expected + math.log(4))


def test_markov_order_warns_for_large_orders():
    with pytest.warns(UserWarning):
        markov_order_select(np.zeros(20, dtype=int) | 1, 5, 2)


def test_markov_one_letter_alphabet():
    res = markov_order_select(np.zeros(10, dtype=int), 2, 1)
    assert res.winner == "order=0"
    assert res.best.codelength == 0.0


def test_to_dict_units():
    fam = Bernoulli()
    res = select([Candidate("fair", PointMass(fam, 0.5))], [0, 1, 0])
    assert res.to_dict(bits=True)["candidates"][0]["codelength_bits"] == pytest.approx(3.0)
    assert res.to_dict()["unit"] == "nats"
