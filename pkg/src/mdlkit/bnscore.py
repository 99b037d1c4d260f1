"""Decomposable Bayesian-network scores and greedy structure search.

Scores are log-scale goodness values (higher is better):

* fNML: one multinomial NML term per child and observed parent configuration;
* qNML: ``log NML(child ∪ parents) - log NML(parents)`` where each NML treats
  the joint configuration of a variable set as one categorical variable;
* BDeu: Dirichlet-multinomial marginal likelihood with per-cell
  hyperparameter ``α / (r q)``.
"""
from __future__ import annotations

import csv
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, xlogy

from ._validation import check_int, check_positive
from .complexity import comp_multinomial_exact
from .exceptions import InvalidInputError, UnsupportedCardinalityError

MAX_COLLAPSED_ARITY = 10**6


@dataclass(frozen=True, eq=False)
class CategoricalDataset:
    """Complete categorical data: ``values[i, j]`` is row ``i`` of variable ``j``."""

    values: np.ndarray
    arities: tuple
    names: tuple
    levels: tuple = field(default=())  # original labels per column, index order

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2:
            raise InvalidInputError("dataset values must be a 2-d array")
        if values.size and (values.dtype.kind not in "iu"):
            if not np.all(values == np.round(values)):
                raise InvalidInputError("dataset values must be integer indices")
        values = values.astype(np.int64)
        arities = tuple(int(a) for a in self.arities)
        if len(arities) != values.shape[1] or len(self.names) != values.shape[1]:
            raise InvalidInputError("one arity and one name per column are required")
        if any(a < 2 for a in arities):
            raise InvalidInputError("every variable needs arity >= 2")
        if values.size and (values.min() < 0 or np.any(values.max(axis=0) >= np.asarray(arities))):
            raise InvalidInputError("cell values must lie in 0..arity-1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "arities", arities)
        object.__setattr__(self, "names", tuple(str(s) for s in self.names))

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def p(self):
        return self.values.shape[1]

    @classmethod
    def from_array(cls, values, arities=None, names=None):
        values = np.asarray(values, dtype=np.int64)
        if arities is None:
            arities = tuple(max(2, int(values[:, j].max()) + 1) if values.shape[0] else 2 for j in range(values.shape[1]))
        if names is None:
            names = tuple(f"X{j}" for j in range(values.shape[1]))
        return cls(values, tuple(arities), tuple(names))

    @classmethod
    def from_rows(cls, header, rows):
        """Index each column's labels by order of first appearance."""
        rows = [list(r) for r in rows]
        if any(len(r) != len(header) for r in rows):
            raise InvalidInputError("ragged CSV rows")
        levels, columns = [], []
        for j in range(len(header)):
            seen = {}
            col = []
            for r in rows:
                if r[j] == "":
                    raise InvalidInputError(f"missing value in column {header[j]!r}")
                col.append(seen.setdefault(r[j], len(seen)))
            levels.append(tuple(seen))
            columns.append(col)
        values = np.array(columns, dtype=np.int64).T.reshape(len(rows), len(header))
        arities = tuple(max(2, len(lv)) for lv in levels)
        return cls(values, arities, tuple(header), tuple(levels))

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise InvalidInputError(f"{path} is empty") from None
            return cls.from_rows(header, list(reader))


class Dag:
    """A DAG as a tuple of parent sets, one per node."""

    def __init__(self, parents):
        self.parents = tuple(frozenset(int(p) for p in ps) for ps in parents)
        if any(i in ps for i, ps in enumerate(self.parents)):
            raise InvalidInputError("self-loops are not allowed")
        if any(p < 0 or p >= len(self.parents) for ps in self.parents for p in ps):
            raise InvalidInputError("parent index out of range")
        if not self.is_acyclic():
            raise InvalidInputError("parent sets contain a directed cycle")

    @classmethod
    def empty(cls, p):
        return cls([()] * p)

    @classmethod
    def from_edges(cls, p, edges):
        parents = [set() for _ in range(p)]
        for a, b in edges:
            parents[b].add(a)
        return cls(parents)

    def __len__(self):
        return len(self.parents)

    def __eq__(self, other):
        return isinstance(other, Dag) and self.parents == other.parents

    def __hash__(self):
        return hash(self.parents)

    def __repr__(self):
        return f"Dag({[sorted(p) for p in self.parents]})"

    @property
    def edges(self):
        return sorted((a, b) for b, ps in enumerate(self.parents) for a in ps)

    def topological_order(self):
        indeg = [len(ps) for ps in self.parents]
        children = [[] for _ in self.parents]
        for b, ps in enumerate(self.parents):
            for a in ps:
                children[a].append(b)
        ready = [i for i, d in enumerate(indeg) if d == 0]
        order = []
        while ready:
            i = ready.pop(0)
            order.append(i)
            for c in children[i]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        return order if len(order) == len(self.parents) else None

    def is_acyclic(self):
        return self.topological_order() is not None

    def has_path(self, src, dst):
        children = [[] for _ in self.parents]
        for b, ps in enumerate(self.parents):
            for a in ps:
                children[a].append(b)
        stack, seen = [src], set()
        while stack:
            i = stack.pop()
            if i == dst:
                return True
            if i in seen:
                continue
            seen.add(i)
            stack.extend(children[i])
        return False

    def with_parents(self, node, parents):
        new = list(self.parents)
        new[node] = frozenset(parents)
        return Dag(new)

    def to_dict(self, names=None):
        names = names or [str(i) for i in range(len(self))]
        return {names[i]: [names[p] for p in sorted(ps)] for i, ps in enumerate(self.parents)}


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


def _config_index(data, columns):
    """Mixed-radix index of each row's configuration of ``columns``."""
    columns = sorted(columns)
    idx = np.zeros(data.n, dtype=np.int64)
    size = 1
    for j in columns:
        size *= data.arities[j]
        if size > MAX_COLLAPSED_ARITY:
            raise UnsupportedCardinalityError(f"more than {MAX_COLLAPSED_ARITY} joint configurations")
        idx = idx * data.arities[j] + data.values[:, j]
    return idx, size


def _contingency(data, child, parents):
    """Observed parent configurations × child-value counts, shape (q_obs, r)."""
    pidx, q = _config_index(data, parents)
    r = data.arities[child]
    if data.n == 0:
        return np.zeros((0, r), dtype=np.int64), q
    _, inverse = np.unique(pidx, return_inverse=True)
    table = np.zeros((inverse.max() + 1, r), dtype=np.int64)
    np.add.at(table, (inverse, data.values[:, child]), 1)
    return table, q


def _log_ml(counts):
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    return float(np.sum(xlogy(counts, counts / total))) if total else 0.0


def _check_family(child, parents, data):
    child = check_int("child", child, minimum=0)
    parents = frozenset(int(p) for p in parents)
    if child >= data.p or any(p < 0 or p >= data.p for p in parents):
        raise InvalidInputError("variable index out of range")
    if child in parents:
        raise InvalidInputError("a variable cannot be its own parent")
    return child, parents


# ---------------------------------------------------------------------------
# local scores
# ---------------------------------------------------------------------------


def fnml_local(child, parents, data):
    """Sum over observed parent configurations of the child's multinomial NML."""
    child, parents = _check_family(child, parents, data)
    table, _ = _contingency(data, child, parents)
    r = data.arities[child]
    return float(sum(_log_ml(row) - comp_multinomial_exact(int(row.sum()), r).nats for row in table))


def nml_full(columns, data):
    """Multinomial NML of the collapsed joint configuration of ``columns``."""
    columns = sorted(columns)
    if not columns:
        return 0.0
    idx, size = _config_index(data, columns)
    counts = np.unique(idx, return_counts=True)[1]
    return _log_ml(counts) - comp_multinomial_exact(data.n, size).nats


def qnml_local(child, parents, data):
    child, parents = _check_family(child, parents, data)
    return nml_full(parents | {child}, data) - nml_full(parents, data)


def bdeu_local(child, parents, data, alpha=1.0):
    """BDeu local score with equivalent sample size ``alpha``.

    ``q`` is the full number of parent configurations; unobserved
    configurations contribute zero.
    """
    alpha = check_positive("alpha", alpha)
    child, parents = _check_family(child, parents, data)
    table, q = _contingency(data, child, parents)
    r = data.arities[child]
    a_cell = alpha / (r * q)
    a_cfg = alpha / q
    n_c = table.sum(axis=1)
    return float(
        np.sum(gammaln(a_cfg) - gammaln(a_cfg + n_c)) + np.sum(gammaln(a_cell + table) - gammaln(a_cell))
    )


SCORES = {"fnml": fnml_local, "qnml": qnml_local, "bdeu": bdeu_local}


class LocalScoreCache:
    """Memo of local scores keyed by ``(score, child, parent set)``.

    Inserts are idempotent, so concurrent writers of the same key are harmless.
    """

    def __init__(self, data, score="fnml", alpha=1.0):
        if score not in SCORES:
            raise InvalidInputError(f"unknown score {score!r}; choose from {sorted(SCORES)}")
        self.data = data
        self.score = score
        self.alpha = check_positive("alpha", alpha)
        self._memo = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def compute(self, child, parents):
        if self.score == "bdeu":
            return bdeu_local(child, parents, self.data, self.alpha)
        return SCORES[self.score](child, parents, self.data)

    def local(self, child, parents):
        key = (child, frozenset(parents))
        value = self._memo.get(key)
        if value is not None:
            with self._lock:
                self.hits += 1
            return value
        value = self.compute(child, parents)
        with self._lock:
            self.misses += 1
            self._memo.setdefault(key, value)
        return value

    def total(self, dag):
        return float(sum(self.local(i, ps) for i, ps in enumerate(dag.parents)))


def network_score(dag, data, score="fnml", alpha=1.0, cache=None):
    """Total decomposable score ``sum_i local(X_i, Pa_i)``."""
    if len(dag) != data.p:
        raise InvalidInputError(f"DAG has {len(dag)} nodes, data has {data.p} columns")
    if cache is None:
        cache = LocalScoreCache(data, score, alpha)
        return float(sum(cache.compute(i, ps) for i, ps in enumerate(dag.parents)))
    return cache.total(dag)


def fnml_total(dag, data, cache=None):
    return network_score(dag, data, "fnml", cache=cache)


def qnml_total(dag, data, cache=None):
    return network_score(dag, data, "qnml", cache=cache)


def bdeu_total(dag, data, alpha=1.0, cache=None):
    return network_score(dag, data, "bdeu", alpha, cache=cache)


# ---------------------------------------------------------------------------
# hill climbing
# ---------------------------------------------------------------------------


@dataclass
class HillClimbResult:
    dag: Dag
    score: float
    trace: list  # (iteration, move, total score) after each accepted move
    local_scores: list
    iterations: int
    seed: int


def _moves(dag, max_parents):
    """All single-edge add/delete/reverse moves in lexicographic order."""
    p = len(dag)
    for a in range(p):
        for b in range(p):
            if a == b:
                continue
            if a in dag.parents[b]:
                yield ("delete", a, b)
                yield ("reverse", a, b)
            elif b not in dag.parents[a]:
                yield ("add", a, b)


def _apply(dag, move, max_parents):
    """Return the changed parent sets as ``{node: parents}`` or ``None`` if invalid."""
    kind, a, b = move
    if kind == "add":
        if len(dag.parents[b]) >= max_parents or dag.has_path(b, a):
            return None
        return {b: dag.parents[b] | {a}}
    if kind == "delete":
        return {b: dag.parents[b] - {a}}
    # reverse a->b into b->a: acyclic iff no other path a ~> b remains
    if len(dag.parents[a]) >= max_parents:
        return None
    trimmed = dag.with_parents(b, dag.parents[b] - {a})
    if trimmed.has_path(a, b):
        return None
    return {b: dag.parents[b] - {a}, a: dag.parents[a] | {b}}


def hill_climb(data, score="fnml", alpha=1.0, max_parents=4, max_iters=1000, seed=0, threads=None, cache=None):
    """Greedy best-improvement search from the empty graph.

    Each iteration evaluates every single-edge addition, deletion and
    reversal, applies the one with the largest score gain, and stops at a
    local optimum or after ``max_iters`` moves.  Equal gains are resolved by
    the lexicographic move order, so the search is deterministic; ``seed`` is
    recorded for provenance only.
    """
    if data.p > 64:
        raise InvalidInputError("hill climbing is limited to 64 variables")
    max_parents = check_int("max_parents", max_parents, minimum=0)
    max_iters = check_int("max_iters", max_iters, minimum=0)
    cache = cache or LocalScoreCache(data, score, alpha)
    dag = Dag.empty(data.p)
    current = cache.total(dag)
    trace = [(0, None, current)]
    it = 0
    pool = ThreadPoolExecutor(max_workers=threads) if threads and threads > 1 else None
    try:
        while it < max_iters:
            moves = []
            for move in _moves(dag, max_parents):
                change = _apply(dag, move, max_parents)
                if change is not None:
                    moves.append((move, change))

            def gain(item):
                _, change = item
                return sum(cache.local(node, ps) - cache.local(node, dag.parents[node]) for node, ps in change.items())

            gains = list(pool.map(gain, moves)) if pool else [gain(m) for m in moves]
            if not gains:
                break
            best = int(np.argmax(gains))  # first maximum = lexicographic tie-break
            if gains[best] <= 1e-9:
                break
            move, change = moves[best]
            parents = list(dag.parents)
            for node, ps in change.items():
                parents[node] = ps
            dag = Dag(parents)
            it += 1
            current = cache.total(dag)
            trace.append((it, move, current))
    finally:
        if pool:
            pool.shutdown()
    locals_ = [cache.local(i, ps) for i, ps in enumerate(dag.parents)]
    return HillClimbResult(dag, current, trace, locals_, it, seed)
