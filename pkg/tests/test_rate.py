import math

import pytest
from hypothesis import given, settings, strategies as st

from treerepeater.channel import ChannelParams, EfficiencyParams
from treerepeater.errors import InfeasibleConfigError, ParameterError
from treerepeater.rate import RepeaterConfig, evaluate, per_second
from treerepeater.timing import MULTIPLEXED, SINGLE_EMITTER, GateTimes, Scheme
from treerepeater.tree import TreeParams

PERFECT = EfficiencyParams(1.0, 1.0, 1.0, 1.0)


def h(x):
    return 0.0 if x in (0.0, 1.0) else -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def test_per_second():
    assert per_second(1.0, 1.0) == 1e9
    assert per_second(0.5, 250.0) == 2e6


def test_perfect_channel_rate_is_inverse_generation_time():
    tree = TreeParams((4, 4, 4))
    r = evaluate(RepeaterConfig(tree, ChannelParams(0.0, 3), PERFECT, GateTimes(), MULTIPLEXED, eps_r=0.0))
    assert r.mu == 0.0 and r.eta_t == 1.0 and r.key_fraction == 1.0
    assert r.rate_hz == 1e9 / 104


def test_composite_rate_from_literal_formulas():
    tree, n_node, distance = TreeParams((4, 8, 4)), 999, 1000.0
    r = evaluate(RepeaterConfig(tree, ChannelParams(distance, n_node), scheme=MULTIPLEXED, eps_r=1e-5))
    mu = 1 - math.exp(-1 / 20) * 0.99 * 0.99 * 0.98
    # (n0, n1, n2) = (4, 8, 4); R3 = 0 and n3 = 0
    R3 = 0.0
    R2 = 1 - (1 - (1 - mu) * 1.0) ** 4
    R1 = 1 - (1 - (1 - mu) * (1 - mu + mu * R3) ** 4) ** 8
    eta = ((1 - mu + mu * R1) ** 4 - (mu * R1) ** 4) * (1 - mu + mu * R2) ** 8
    q = 2 * 1000 * 1e-5 / 3
    f = (1 - q) * (1 - h((1 - 1.5 * q) / (1 - q))) - h(q)
    t = 4 * 1 + (4 * 10 + 10) + (8 * 10 + 10)
    assert r.t_gen_ns == t == 144
    assert r.emitters == 4 * 9
    assert r.rate_hz == pytest.approx(f * eta ** 1000 / t * 1e9, rel=1e-11)
    assert r.rate_hz > 1e6


def test_recompute_matches():
    r = evaluate(RepeaterConfig(TreeParams((3, 5, 2)), ChannelParams(300.0, 50)))
    assert r.recompute_rate() == r.rate_hz


def test_infeasible_error_budget():
    with pytest.raises(InfeasibleConfigError):
        evaluate(RepeaterConfig(TreeParams((2, 2)), ChannelParams(100.0, 99), eps_r=0.02))


def test_zero_generation_time_rejected():
    with pytest.raises(ParameterError):
        evaluate(RepeaterConfig(TreeParams((2, 2)), ChannelParams(1.0, 0), gates=GateTimes(0, 0, 0)))


trees = st.lists(st.integers(1, 6), min_size=2, max_size=4).map(lambda b: TreeParams(tuple(b)))


@settings(max_examples=60, deadline=None)
@given(trees, st.integers(0, 200), st.floats(1e-7, 1e-4), st.floats(1.01, 10.0))
def test_rate_monotone_in_error_and_gate_times(tree, n_node, eps_r, factor):
    ch = ChannelParams(300.0, n_node)
    base = evaluate(RepeaterConfig(tree, ch, eps_r=eps_r))
    noisier = evaluate(RepeaterConfig(tree, ch, eps_r=eps_r * factor))
    slower = evaluate(RepeaterConfig(tree, ch, gates=GateTimes().scaled(factor), eps_r=eps_r))
    assert noisier.rate_hz <= base.rate_hz
    assert slower.rate_hz <= base.rate_hz
    assert slower.rate_hz == pytest.approx(base.rate_hz / factor, rel=1e-12)


def test_single_emitter_slower_than_multiplexed():
    ch = ChannelParams(100.0, 20)
    for br in [(2, 3, 2), (4, 4, 4), (3, 6, 2, 2)]:
        tree = TreeParams(br)
        assert (evaluate(RepeaterConfig(tree, ch, scheme=SINGLE_EMITTER)).rate_hz
                <= evaluate(RepeaterConfig(tree, ch, scheme=MULTIPLEXED)).rate_hz)
        assert (evaluate(RepeaterConfig(tree, ch, scheme=Scheme.rounds(1))).rate_hz
                == pytest.approx(evaluate(RepeaterConfig(tree, ch)).rate_hz, rel=1e-15))
