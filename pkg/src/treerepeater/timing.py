"""Generation time of a tree cluster state and the number of emitters it needs.

Four schemes are modelled: a single cavity-coupled emitter, an emitter with an
ancillary spin, a multiplexed emitter array producing each layer in parallel,
and the multiplexed array re-used for ``m`` rounds on the bottom layers.
All durations are in nanoseconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ParameterError
from .tree import TreeParams


@dataclass(frozen=True)
class GateTimes:
    t_p: float = 1.0    # P gate: emit one photon entangled with the emitter
    t_e: float = 10.0   # E gate: emit a photon, then measure the emitter
    t_cz: float = 10.0  # CZ between photon and emitter, or emitter and emitter
    beta: float = 1.0   # long/normal wave-packet ratio, ancilla scheme only

    def __post_init__(self):
        for name in ("t_p", "t_e", "t_cz", "beta"):
            value = getattr(self, name)
            if not (value >= 0.0 and math.isfinite(value)):
                raise ParameterError(f"{name} must be finite and >= 0, got {value!r}")

    def scaled(self, factor: float) -> "GateTimes":
        return GateTimes(self.t_p * factor, self.t_e * factor, self.t_cz * factor, self.beta)


class SchemeKind(str, Enum):
    SINGLE = "single"
    ANCILLA = "ancilla"
    MULTIPLEXED = "multiplexed"
    ROUNDS = "rounds"


@dataclass(frozen=True)
class Scheme:
    kind: SchemeKind
    m: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", SchemeKind(self.kind))
        if self.m < 1 or int(self.m) != self.m:
            raise ParameterError(f"rounds m must be a positive integer, got {self.m!r}")
        if self.kind is not SchemeKind.ROUNDS and self.m != 1:
            raise ParameterError(f"m is only meaningful for the rounds scheme, got m={self.m}")

    @classmethod
    def rounds(cls, m: int) -> "Scheme":
        return cls(SchemeKind.ROUNDS, m)

    @property
    def sort_key(self) -> tuple[int, int]:
        """Tie-break order: multiplexed before rounds, then smaller m."""
        order = {SchemeKind.SINGLE: 0, SchemeKind.ANCILLA: 1, SchemeKind.MULTIPLEXED: 2, SchemeKind.ROUNDS: 3}
        return order[self.kind], self.m

    def label(self) -> str:
        return self.kind.value


SINGLE_EMITTER = Scheme(SchemeKind.SINGLE)
EMITTER_PLUS_ANCILLA = Scheme(SchemeKind.ANCILLA)
MULTIPLEXED = Scheme(SchemeKind.MULTIPLEXED)


def _check_rounds(tree: TreeParams, scheme: Scheme) -> None:
    if scheme.kind is SchemeKind.ROUNDS:
        n_pen = tree.branching[-2]
        if n_pen % scheme.m:
            raise ParameterError(f"m={scheme.m} does not divide n_(d-2)={n_pen} for tree {tree.label()}")


def _prefix_products(br: tuple[int, ...], upto: int) -> list[int]:
    """``[prod(br[:l+1]) for l in 0..upto]`` (empty when upto < 0)."""
    return [math.prod(br[:l + 1]) for l in range(upto + 1)]


def generation_time(tree: TreeParams, gates: GateTimes, scheme: Scheme) -> float:
    """Time to produce one tree cluster state, in ns."""
    _check_rounds(tree, scheme)
    br = tree.branching
    d = tree.depth
    t_p, t_e, t_cz = gates.t_p, gates.t_e, gates.t_cz
    kind = scheme.kind
    if kind in (SchemeKind.SINGLE, SchemeKind.ANCILLA):
        photons_last = math.prod(br)
        cz_count = sum(_prefix_products(br, d - 2))
        e_count = sum(_prefix_products(br, d - 2)[1:])
        if kind is SchemeKind.ANCILLA:
            e_weight = gates.beta * br[0] + e_count
        else:
            e_weight = e_count
        return photons_last * t_p + e_weight * t_e + cz_count * t_cz
    if kind is SchemeKind.MULTIPLEXED:
        return br[-1] * t_p + sum(n * t_cz + t_e for n in br[:-1])
    m = scheme.m
    bottom = m * (br[-1] * t_p + (br[-2] // m) * t_cz + t_e)
    return bottom + sum(n * t_cz + t_e for n in br[:-2])


def emitter_count(tree: TreeParams, scheme: Scheme) -> int:
    """Number of quantum emitters the scheme requires.

    For depth 2 the multiplexed count reduces to ``n_0 + 1`` (empty prefix
    product); this corner is not exercised by the multiplexed protocol itself.
    """
    if scheme.kind is SchemeKind.SINGLE:
        return 1
    if scheme.kind is SchemeKind.ANCILLA:
        return 2
    _check_rounds(tree, scheme)
    br = tree.branching
    prefix = math.prod(br[:-2])
    return prefix * (br[-2] // scheme.m + 1)
