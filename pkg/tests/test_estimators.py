import doctest

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import adaseq.estimators
from adaseq import (AcceleratedContinuousGreedy, AdaptiveSequencingMaximizer, BruteForceMaximizer,
                    GreedyMaximizer, ModularFunction, UniformMatroid)
from adaseq.core import ValidationError
from adaseq.matroids import IntersectionConstraint

F = ModularFunction([5, 1, 4, 2, 3])
M = UniformMatroid(5, 2)


def test_module_doctest():
    assert doctest.testmod(adaseq.estimators).failed == 0


@pytest.mark.parametrize("est", [AdaptiveSequencingMaximizer(rho=3), AdaptiveSequencingMaximizer(),
                                 AcceleratedContinuousGreedy(step_size=0.5, mc_samples=64),
                                 GreedyMaximizer(), GreedyMaximizer(lazy=True), BruteForceMaximizer()],
                         ids=lambda e: repr(e))
def test_fit_and_fitted_attributes(est):
    with pytest.raises(NotFittedError):
        est.score()
    out = est.fit(F, M)
    assert out is est
    assert M.is_independent(est.solution_)
    assert est.value_ == F(est.solution_) == est.score()
    assert est.ledger_.f_rounds >= 1
    assert est.value_ >= 0.35 * 9


def test_params_round_trip():
    est = AdaptiveSequencingMaximizer(epsilon=0.2, rho=4, random_state=3)
    assert est.get_params()["rho"] == 4
    est.set_params(rho=7)
    twin = clone(est)
    assert twin.get_params() == est.get_params()
    assert not hasattr(twin, "solution_")


def test_acg_transform():
    est = AcceleratedContinuousGreedy(step_size=0.25, surrogate="exact").fit(F, M)
    assert est.x_.weight_sum == 1
    draws = est.transform(5)
    assert len(draws) == 5 and all(M.is_independent(S) for S in draws)
    assert est.ledger_.f_rounds > 0


def test_same_seed_same_answer():
    a = AdaptiveSequencingMaximizer(rho=4, random_state=5).fit(F, M)
    b = AdaptiveSequencingMaximizer(rho=4, random_state=5).fit(F, M)
    assert a.solution_ == b.solution_ and a.ledger_ == b.ledger_


def test_input_validation():
    with pytest.raises(ValidationError):
        AdaptiveSequencingMaximizer().fit(lambda S: 0, M)
    with pytest.raises(ValidationError):
        AdaptiveSequencingMaximizer().fit(F, UniformMatroid(4, 1))
    with pytest.raises(ValidationError):
        AdaptiveSequencingMaximizer().fit(F, "uniform")
    with pytest.raises(ValidationError):
        AdaptiveSequencingMaximizer(rho=3, istar_search="binary").fit(F, M)
    with pytest.raises(ValidationError):
        AdaptiveSequencingMaximizer(random_state=np.random.default_rng()).fit(F, M)
    with pytest.raises(ValidationError):
        AcceleratedContinuousGreedy().fit(F, IntersectionConstraint([M]))
