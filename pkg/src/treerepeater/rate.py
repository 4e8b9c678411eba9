"""End-to-end secret key rate of a tree-encoded one-way repeater chain."""

from __future__ import annotations

from dataclasses import dataclass, field

from .channel import ChannelParams, EfficiencyParams, single_photon_loss
from .errors import ParameterError
from .qkd import ErrorParams, key_fraction, qber_from_error
from .timing import MULTIPLEXED, GateTimes, Scheme, emitter_count, generation_time
from .tree import TreeParams, transmission_probability

NS_PER_S = 1e9


def per_second(count: float, t_ns: float) -> float:
    """``count`` events per ``t_ns`` nanoseconds, in Hz.  The only ns -> s conversion."""
    return count / t_ns * NS_PER_S


@dataclass(frozen=True)
class RepeaterConfig:
    tree: TreeParams
    channel: ChannelParams
    efficiencies: EfficiencyParams = field(default_factory=EfficiencyParams)
    gates: GateTimes = field(default_factory=GateTimes)
    scheme: Scheme = MULTIPLEXED
    eps_r: float = 1e-5

    @property
    def errors(self) -> ErrorParams:
        return ErrorParams(self.eps_r, self.channel.n_node)


@dataclass(frozen=True)
class RateResult:
    mu: float
    eta_t: float
    t_gen_ns: float
    eps_p: float
    qber: float
    key_fraction: float
    rate_hz: float
    emitters: int
    n_node: int

    def recompute_rate(self) -> float:
        return per_second(self.key_fraction * self.eta_t ** (self.n_node + 1), self.t_gen_ns)


def evaluate(config: RepeaterConfig) -> RateResult:
    """Secret key rate ``f * eta_t^(N+1) / T`` with every intermediate quantity."""
    ch = config.channel
    errors = config.errors  # raises InfeasibleConfigError when eps_p > 1
    mu = single_photon_loss(ch.spacing_km, ch.l_att_km, config.efficiencies)
    eta_t = transmission_probability(config.tree, mu)
    t_gen = generation_time(config.tree, config.gates, config.scheme)
    if not t_gen > 0.0:
        raise ParameterError("generation time is zero; at least one gate duration must be positive")
    qber = qber_from_error(errors.eps_p)
    f = key_fraction(qber)
    return RateResult(
        mu=mu,
        eta_t=eta_t,
        t_gen_ns=t_gen,
        eps_p=errors.eps_p,
        qber=qber,
        key_fraction=f,
        rate_hz=per_second(f * eta_t ** (ch.n_node + 1), t_gen),
        emitters=emitter_count(config.tree, config.scheme),
        n_node=ch.n_node,
    )
