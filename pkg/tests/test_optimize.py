import pytest
from hypothesis import given, settings, strategies as st

from oracles import naive_optimize
from treerepeater.errors import ParameterError
from treerepeater.optimize import OptimizationProblem, config_key, optimize, sweep_distance, sweep_emitters
from treerepeater.rate import evaluate
from treerepeater.timing import GateTimes

SMALL = dict(d_max=3, n_max=4, n_node_max=4)


def assert_matches_naive(problem):
    key, config, result = naive_optimize(problem)
    outcome = optimize(problem)
    assert outcome.best_config == config
    assert outcome.best == result
    assert config_key(outcome.best_config, outcome.best) == key


@pytest.mark.parametrize("kwargs", [
    dict(total_distance_km=5.0, emitter_budget=20),
    dict(total_distance_km=5.0, emitter_budget=6, eps_r=0.05),
    dict(total_distance_km=5.0, emitter_budget=20, eps_r=0.2),   # every rate is zero
    dict(total_distance_km=3.0, emitter_budget=12, gates=GateTimes(0, 0, 1)),
    dict(total_distance_km=5.0, emitter_budget=15, allow_rounds=False),
])
def test_matches_brute_force(kwargs):
    assert_matches_naive(OptimizationProblem(**kwargs, **SMALL))


@settings(max_examples=15, deadline=None)
@given(
    distance=st.floats(0.5, 40.0),
    budget=st.integers(2, 30),
    eps_r=st.sampled_from([0.0, 1e-5, 1e-3, 0.03]),
    gates=st.tuples(st.integers(0, 20), st.integers(0, 20), st.integers(1, 20)),
    rounds=st.booleans(),
)
def test_matches_brute_force_random(distance, budget, eps_r, gates, rounds):
    problem = OptimizationProblem(distance, budget, eps_r, gates=GateTimes(*map(float, gates)),
                                  allow_rounds=rounds, min_spacing_km=0.5, d_max=3, n_max=3, n_node_max=5)
    assert_matches_naive(problem)


def test_budget_below_any_tree_is_infeasible():
    outcome = optimize(OptimizationProblem(10.0, 1, **SMALL))
    assert not outcome.feasible
    assert outcome.rate_hz == 0.0
    assert outcome.best_config is None


def test_invalid_problem():
    with pytest.raises(ParameterError):
        OptimizationProblem(10.0, 10, d_max=1)
    with pytest.raises(ParameterError):
        OptimizationProblem(10.0, 10, min_spacing_km=0.0)


def test_reported_rate_is_reproducible():
    outcome = optimize(OptimizationProblem(400.0, 60))
    assert evaluate(outcome.best_config) == outcome.best
    assert outcome.best.emitters <= 60
    assert outcome.best_config.channel.spacing_km >= 1.0


def test_deterministic_across_workers():
    problem = OptimizationProblem(250.0, 40, eps_r=1e-4, d_max=4, n_max=12)
    a, b, c = optimize(problem), optimize(problem), optimize(problem, workers=4)
    assert a.best_config == b.best_config == c.best_config
    assert a.best == b.best == c.best


def test_budget_curve_non_decreasing_and_matches_single_solves():
    budgets = [3, 6, 10, 20, 40]
    rows = sweep_emitters(200.0, budgets, d_max=4, n_max=10)
    rates = [o.rate_hz for _, o in rows]
    assert all(b >= a for a, b in zip(rates, rates[1:]))
    for budget, outcome in rows:
        single = optimize(OptimizationProblem(200.0, budget, d_max=4, n_max=10))
        assert single.best == outcome.best
    with pytest.raises(ParameterError):
        sweep_emitters(200.0, [])


def test_sweep_distance_order():
    rows = sweep_distance([20.0, 10.0], 10, [1e-4, 1e-5], [GateTimes(), GateTimes().scaled(10)], **SMALL)
    assert [(r.gates.t_p, r.eps_r, r.distance_km) for r in rows] == [
        (1.0, 1e-4, 20.0), (1.0, 1e-4, 10.0), (1.0, 1e-5, 20.0), (1.0, 1e-5, 10.0),
        (10.0, 1e-4, 20.0), (10.0, 1e-4, 10.0), (10.0, 1e-5, 20.0), (10.0, 1e-5, 10.0)]
    for r in rows:
        alone = optimize(OptimizationProblem(r.distance_km, 10, r.eps_r, gates=r.gates, **SMALL))
        assert alone.best == r.outcome.best
