"""Switch distribution between two universal codes.

Switch index ``i`` means outcome ``z_i`` is the first one predicted by ``u1``;
``i = 1`` uses ``u1`` throughout.  The joint is

    ū_switch(z^n) = sum_i pi(i) · ū0(z^{i-1}) · ū1(z_i..z_n | z^{i-1})

with conditionals of ``u1`` taken from its horizon-``n`` prefix marginals.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .exceptions import InvalidInputError
from .universal import UniversalDistribution, _head, _length


def default_switch_prior(i):
    """``pi(i) = 1 / (i (i + 1))``, a proper mass on the positive integers."""
    i = np.asarray(i, dtype=float)
    return 1.0 / (i * (i + 1.0))


@dataclass(frozen=True)
class SwitchBoundCheck:
    holds: bool
    witness: int  # minimizing switch index i*
    switch_codelength: float
    best_switch_codelength: float
    slack: float  # bound minus switch code length; >= 0 when the bound holds


class SwitchDistribution(UniversalDistribution):
    """Mixture over switch points from ``u0`` to ``u1``.

    Parameters
    ----------
    u0, u1 : UniversalDistribution
        Codes for the simple and the complex model.
    prior : callable, optional
        Switch-point mass ``pi(i)`` on ``i = 1, 2, ...``; vectorized.
    mode : {"renormalize", "subdistribution"}
        ``"renormalize"`` rescales ``pi`` to sum to one on ``1..n``.
        ``"subdistribution"`` keeps ``pi`` as is and gives the tail mass
        ``sum_{i > n} pi(i)`` to never switching (``u0`` throughout).
    """

    def __init__(self, u0, u1, prior=None, mode="renormalize"):
        if mode not in ("renormalize", "subdistribution"):
            raise InvalidInputError(f"unknown switch mode {mode!r}")
        self.u0 = u0
        self.u1 = u1
        self.prior = default_switch_prior if prior is None else prior
        self.mode = mode
        self.family = u1.family
        self.horizon_free = False

    def __repr__(self):
        return f"SwitchDistribution({self.u0!r}, {self.u1!r}, mode={self.mode!r})"

    def log_switch_weights(self, n):
        """Log mass of switch points ``1..n`` and of never switching (last entry)."""
        pi = np.asarray(self.prior(np.arange(1, n + 1)), dtype=float)
        if np.any(pi < 0):
            raise InvalidInputError("switch prior must be nonnegative")
        with np.errstate(divide="ignore"):
            if self.mode == "renormalize":
                return np.r_[np.log(pi / pi.sum()), -np.inf]
            return np.r_[np.log(pi), np.log(max(1.0 - pi.sum(), 0.0))]

    def _prefix_tables(self, data, horizon):
        m = _length(data)
        l0 = np.array([self.u0.log_prefix(_head(data, j), horizon) for j in range(m + 1)])
        l1 = np.array([self.u1.log_prefix(_head(data, j), horizon) for j in range(m + 1)])
        return l0, l1

    def _log_prefix_from_tables(self, l0, l1, j, logw):
        n = logw.size - 1
        # switch points i <= j: u0 on z^{i-1}, u1 on z_i..z_j
        i = np.arange(1, j + 1)
        terms = logw[i - 1] + l0[i - 1] + l1[j] - l1[i - 1]
        # switch points after j (and never switching): u0 on the whole prefix
        tail = logsumexp(logw[j:n + 1]) if j < n else logw[n]
        return float(logsumexp(np.r_[terms, tail + l0[j]]))

    def log_prob(self, data):
        n = _length(data)
        if n == 0:
            raise InvalidInputError("the switch distribution needs at least one outcome")
        return self.log_prefix(data, n)

    def log_prefix(self, prefix, horizon=None):
        m = _length(prefix)
        horizon = m if horizon is None else horizon
        if horizon < m:
            raise InvalidInputError(f"horizon {horizon} is shorter than the prefix ({m})")
        if m == 0:
            return 0.0
        l0, l1 = self._prefix_tables(prefix, horizon)
        return self._log_prefix_from_tables(l0, l1, m, self.log_switch_weights(horizon))

    def log_losses(self, data):
        n = _length(data)
        l0, l1 = self._prefix_tables(data, n)
        logw = self.log_switch_weights(n)
        prefixes = np.array([0.0] + [self._log_prefix_from_tables(l0, l1, j, logw) for j in range(1, n + 1)])
        return -np.diff(prefixes)

    def switch_codelengths(self, data):
        """Code length of switching at each ``i = 1..n`` with hindsight (no prior term)."""
        n = _length(data)
        l0, l1 = self._prefix_tables(data, n)
        i = np.arange(1, n + 1)
        return -(l1[n] - l1[i - 1]) - l0[i - 1]


def switch_log_marginal(switch, data):
    return switch.log_prob(data)


def switch_regret_bound_check(switch, data):
    """Check ``-log ū_switch ≤ min_i [ -log ū1(z_i..z_n|z^{i-1}) - log ū0(z^{i-1}) ] + 2 log n``."""
    n = _length(data)
    if n == 0:
        raise InvalidInputError("the switch bound needs at least one outcome")
    lengths = switch.switch_codelengths(data)
    i_star = int(np.argmin(lengths)) + 1
    switch_len = -switch.log_prob(data)
    bound = float(lengths[i_star - 1] + 2.0 * np.log(n))
    slack = bound - switch_len
    return SwitchBoundCheck(bool(slack >= -1e-9), i_star, float(switch_len), float(lengths[i_star - 1]), float(slack))
