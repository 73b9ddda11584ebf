"""Estimator-style wrappers: configure with hyper-parameters, ``fit(f, constraint)``, read fitted attributes.

    >>> from adaseq import ModularFunction, UniformMatroid
    >>> est = AdaptiveSequencingMaximizer(epsilon=0.1, rho=5, random_state=0)
    >>> est.fit(ModularFunction([3, 1, 2]), UniformMatroid(3, 2)).solution_
    frozenset({0, 2})
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .continuous import accelerated_continuous_greedy, swap_round
from .core import AlgoParams, Matroid, SetFunction, ValidationError
from .maximize import adaptive_sequencing, adaptive_sequencing_pp, brute_force, greedy, lazy_greedy


def check_set_function(f) -> SetFunction:
    if not callable(f) or not isinstance(getattr(f, "n", None), (int, np.integer)):
        raise ValidationError(f"expected a set function with an integer ground-set size, got {f!r}")
    if f.n < 1:
        raise ValidationError("set function needs n >= 1")
    if not hasattr(f, "evaluate_batch"):
        raise ValidationError(f"{type(f).__name__} does not implement evaluate_batch; subclass SetFunction")
    return f


def check_constraint(constraint, n: int | None = None) -> Matroid:
    if not isinstance(constraint, Matroid):
        raise ValidationError(f"expected a Matroid oracle, got {type(constraint).__name__}")
    if n is not None and constraint.n != n:
        raise ValidationError(f"constraint has n={constraint.n}, function has n={n}")
    return constraint


def _seed(random_state) -> int:
    if random_state is None:
        return int(np.random.SeedSequence().entropy % 2**63)
    if isinstance(random_state, (int, np.integer)):
        return int(random_state)
    raise ValidationError("random_state must be an int or None")


class _Maximizer(BaseEstimator):
    def score(self, f=None, constraint=None):
        check_is_fitted(self, "value_")
        return self.value_

    def _store(self, report):
        self.report_ = report
        self.solution_ = report.solution
        self.value_ = report.value
        self.ledger_ = report.ledger
        self.trace_ = report.trace
        return self


class AdaptiveSequencingMaximizer(_Maximizer):
    """Adaptive sequencing; ``rho > 1`` runs the ++ variant with rho trials per round."""

    def __init__(self, epsilon=0.05, rho=1, outer_iterations=None, generator="independence",
                 istar_search="linear", instrument=False, random_state=0):
        self.epsilon = epsilon
        self.rho = rho
        self.outer_iterations = outer_iterations
        self.generator = generator
        self.istar_search = istar_search
        self.instrument = instrument
        self.random_state = random_state

    def fit(self, f, constraint):
        f = check_set_function(f)
        constraint = check_constraint(constraint, f.n)
        params = AlgoParams(epsilon=self.epsilon, rho=self.rho, outer_iterations=self.outer_iterations,
                            seed=_seed(self.random_state))
        if self.rho == 1:
            rep = adaptive_sequencing(f, constraint, params, generator=self.generator,
                                      istar_search=self.istar_search, instrument=self.instrument)
        else:
            if self.istar_search != "linear":
                raise ValidationError("binary-search i* requires rho=1")
            rep = adaptive_sequencing_pp(f, constraint, params, generator=self.generator,
                                         instrument=self.instrument)
        return self._store(rep)


class AcceleratedContinuousGreedy(_Maximizer):
    """Fractional solution ``x_`` plus a swap-rounded feasible set ``solution_``."""

    def __init__(self, epsilon=0.05, step_size=0.1, mc_samples=None, outer_iterations=None,
                 surrogate="mc", generator="independence", random_state=0):
        self.epsilon = epsilon
        self.step_size = step_size
        self.mc_samples = mc_samples
        self.outer_iterations = outer_iterations
        self.surrogate = surrogate
        self.generator = generator
        self.random_state = random_state

    def fit(self, f, constraint):
        f = check_set_function(f)
        constraint = check_constraint(constraint, f.n)
        seed = _seed(self.random_state)
        params = AlgoParams(epsilon=self.epsilon, step_size=self.step_size, mc_samples=self.mc_samples,
                            outer_iterations=self.outer_iterations, seed=seed)
        state = accelerated_continuous_greedy(f, constraint, params, surrogate=self.surrogate,
                                              generator=self.generator)
        self.state_ = state
        self.x_ = state.x
        self.ledger_ = state.ledger
        self.trace_ = state.trace_rows()
        self._constraint = constraint
        self._rng = np.random.default_rng([seed, 1])
        self.solution_ = swap_round(state.x, constraint, self._rng, state.ledger)
        self.value_ = float(f(self.solution_))
        return self

    def transform(self, n_draws: int = 1):
        """Independent swap roundings of the fitted fractional point."""
        check_is_fitted(self, "x_")
        return [swap_round(self.x_, self._constraint, self._rng) for _ in range(n_draws)]


class GreedyMaximizer(_Maximizer):
    def __init__(self, lazy=False):
        self.lazy = lazy

    def fit(self, f, constraint):
        f = check_set_function(f)
        constraint = check_constraint(constraint, f.n)
        return self._store((lazy_greedy if self.lazy else greedy)(f, constraint))


class BruteForceMaximizer(_Maximizer):
    def fit(self, f, constraint):
        f = check_set_function(f)
        constraint = check_constraint(constraint, f.n)
        return self._store(brute_force(f, constraint))


__all__ = [
    "AdaptiveSequencingMaximizer",
    "AcceleratedContinuousGreedy",
    "GreedyMaximizer",
    "BruteForceMaximizer",
    "check_set_function",
    "check_constraint",
]
