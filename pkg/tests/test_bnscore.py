import itertools
import math

import numpy as np
import pytest
from scipy.special import gammaln

from mdlkit import (
    CategoricalDataset,
    Dag,
    InvalidInputError,
    LocalScoreCache,
    bdeu_local,
    bdeu_total,
    comp_multinomial_exact,
    fnml_local,
    fnml_total,
    hill_climb,
    network_score,
    nml_full,
    qnml_local,
    qnml_total,
)
from mdlkit.exceptions import UnsupportedCardinalityError


def chain_data(n=500, seed=0, noise=0.15):
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, n)
    y = np.where(rng.random(n) < noise, 1 - x, x)
    z = np.where(rng.random(n) < noise, 1 - y, y)
    return CategoricalDataset.from_array(np.c_[x, y, z], names=("X", "Y", "Z"))


def brute_bdeu(child, parents, data, alpha):
    r = data.arities[child]
    pa = sorted(parents)
    configs = list(itertools.product(*[range(data.arities[p]) for p in pa]))
    q = len(configs)
    total = 0.0
    for cfg in configs:
        mask = np.all(data.values[:, pa] == np.array(cfg, dtype=int), axis=1) if pa else np.ones(data.n, bool)
        counts = np.bincount(data.values[mask, child], minlength=r)
        total += gammaln(alpha / q) - gammaln(alpha / q + counts.sum())
        total += np.sum(gammaln(alpha / (r * q) + counts) - gammaln(alpha / (r * q)))
    return total


def test_fnml_local_by_hand():
    data = CategoricalDataset.from_array(np.array([[0, 0], [0, 1], [1, 1], [1, 1], [0, 0]]))
    # parent X0=0 -> child (0,1,0): counts (2,1); X0=1 -> (1,1): counts (0,2)
    expected = (2 * math.log(2 / 3) + math.log(1 / 3) - comp_multinomial_exact(3, 2).nats) + (
        0.0 - comp_multinomial_exact(2, 2).nats
    )
    assert fnml_local(1, {0}, data) == pytest.approx(expected)


def test_nml_full_collapses_configurations():
    data = CategoricalDataset.from_array(np.array([[0, 1], [1, 1], [0, 1], [1, 0]]))
    # joint configs 01, 11, 01, 10 -> counts (2,1,1) of 4 cells
    expected = 2 * math.log(0.5) + 2 * math.log(0.25) - comp_multinomial_exact(4, 4).nats
    assert nml_full({0, 1}, data) == pytest.approx(expected)
    assert qnml_local(0, set(), data) == pytest.approx(nml_full({0}, data))


@pytest.mark.parametrize("alpha", [0.5, 1.0, 4.0])
def test_bdeu_matches_brute_force(alpha):
    data = chain_data(60, seed=1)
    for child, parents in [(0, ()), (1, (0,)), (2, (0, 1))]:
        assert bdeu_local(child, parents, data, alpha) == pytest.approx(brute_bdeu(child, parents, data, alpha))


@pytest.mark.parametrize("seed", range(5))
def test_two_node_equivalence(seed):
    rng = np.random.default_rng(seed)
    data = CategoricalDataset.from_array(rng.integers(0, 2, (40, 2)), arities=(2, 2))
    xy, yx = Dag.from_edges(2, [(0, 1)]), Dag.from_edges(2, [(1, 0)])
    assert qnml_total(xy, data) == pytest.approx(qnml_total(yx, data), abs=1e-9)
    assert bdeu_total(xy, data, 2.0) == pytest.approx(bdeu_total(yx, data, 2.0), abs=1e-9)


def test_three_node_equivalence_class():
    data = chain_data(200, seed=2)
    chain = Dag.from_edges(3, [(0, 1), (1, 2)])
    rev = Dag.from_edges(3, [(2, 1), (1, 0)])
    fork = Dag.from_edges(3, [(1, 0), (1, 2)])
    collider = Dag.from_edges(3, [(0, 1), (2, 1)])
    for total in (qnml_total, lambda d, x: bdeu_total(d, x, 1.0)):
        scores = [total(d, data) for d in (chain, rev, fork)]
        assert max(scores) - min(scores) < 1e-9
        assert abs(total(collider, data) - scores[0]) > 1e-6


def test_fnml_is_decomposable_and_cache_transparent():
    data = chain_data(300, seed=3)
    dag = Dag.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    cache = LocalScoreCache(data, "fnml")
    locals_ = [fnml_local(i, ps, data) for i, ps in enumerate(dag.parents)]
    assert fnml_total(dag, data) == pytest.approx(sum(locals_), abs=1e-12)
    assert fnml_total(dag, data, cache=cache) == pytest.approx(fnml_total(dag, data), abs=1e-12)
    fnml_total(dag, data, cache=cache)
    assert cache.hits == 3 and cache.misses == 3


def test_dag_validation():
    with pytest.raises(InvalidInputError):
        Dag.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(InvalidInputError):
        Dag([{0}])
    d = Dag.from_edges(3, [(0, 1), (1, 2)])
    assert d.has_path(0, 2) and not d.has_path(2, 0)
    assert d.topological_order() == [0, 1, 2]


def test_hill_climb_finds_chain_skeleton():
    data = chain_data(1000, seed=4)
    for score in ("fnml", "qnml", "bdeu"):
        res = hill_climb(data, score)
        skeleton = {frozenset(e) for e in res.dag.edges}
        assert skeleton == {frozenset((0, 1)), frozenset((1, 2))}, score
        assert res.score == pytest.approx(network_score(res.dag, data, score), abs=1e-9)
        assert all(b[2] > a[2] for a, b in zip(res.trace, res.trace[1:]))


def test_hill_climb_deterministic_and_thread_invariant():
    data = chain_data(400, seed=5)
    a = hill_climb(data, "fnml", seed=1)
    b = hill_climb(data, "fnml", seed=1, threads=4)
    assert a.dag == b.dag and a.trace == b.trace


def test_max_parents_respected():
    rng = np.random.default_rng(6)
    x = rng.integers(0, 2, (500, 3))
    y = (x.sum(axis=1) >= 2).astype(int)
    data = CategoricalDataset.from_array(np.c_[x, y])
    res = hill_climb(data, "bdeu", max_parents=1)
    assert all(len(ps) <= 1 for ps in res.dag.parents)


def test_from_rows_first_appearance():
    data = CategoricalDataset.from_rows(["a", "b"], [["x", "1"], ["y", "0"], ["x", "0"]])
    assert data.levels == (("x", "y"), ("1", "0"))
    assert data.values.tolist() == [[0, 0], [1, 1], [0, 1]]


def test_arity_overflow():
    data = CategoricalDataset.from_array(np.zeros((3, 7), dtype=int), arities=(10,) * 7)
    with pytest.raises(UnsupportedCardinalityError):
        qnml_local(0, set(range(1, 7)), data)
