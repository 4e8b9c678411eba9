"""Fiber attenuation and system efficiency for a single repeater hop."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

L_ATT_KM = 20.0


@dataclass(frozen=True)
class EfficiencyParams:
    """Coupling and detection efficiencies; defaults are the hardware table values."""

    eta_c: float = 1.0   # photon -> cavity mode
    eta_w: float = 0.99  # cavity -> waveguide
    eta_f: float = 0.99  # waveguide -> fiber
    eta_d: float = 0.98  # detector

    def __post_init__(self):
        for name in ("eta_c", "eta_w", "eta_f", "eta_d"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class ChannelParams:
    """A repeater chain of ``n_node`` equally spaced stations over ``total_distance_km``."""

    total_distance_km: float
    n_node: int
    l_att_km: float = L_ATT_KM

    def __post_init__(self):
        if not self.total_distance_km >= 0.0 or math.isinf(self.total_distance_km):
            raise DomainError(f"total_distance_km must be finite and >= 0, got {self.total_distance_km!r}")
        if int(self.n_node) != self.n_node or self.n_node < 0:
            raise DomainError(f"n_node must be a non-negative integer, got {self.n_node!r}")
        if not self.l_att_km > 0.0:
            raise DomainError(f"l_att_km must be positive, got {self.l_att_km!r}")

    @property
    def n_hops(self) -> int:
        return self.n_node + 1

    @property
    def spacing_km(self) -> float:
        return self.total_distance_km / (self.n_node + 1)


def hop_transmission(spacing_km: float, l_att_km: float = L_ATT_KM) -> float:
    """Single-photon fiber transmission ``exp(-L0 / L_att)`` between neighbouring nodes."""
    if not l_att_km > 0.0:
        raise DomainError(f"l_att_km must be positive, got {l_att_km!r}")
    if not spacing_km >= 0.0:
        raise DomainError(f"spacing_km must be >= 0, got {spacing_km!r}")
    return math.exp(-spacing_km / l_att_km)


def system_efficiency(eff: EfficiencyParams) -> float:
    return eff.eta_c * eff.eta_w * eff.eta_f * eff.eta_d


def single_photon_loss(spacing_km: float, l_att_km: float = L_ATT_KM,
                       eff: EfficiencyParams | None = None) -> float:
    """Per-hop photon loss probability ``mu = 1 - eta_0 * eta_s``."""
    eff = EfficiencyParams() if eff is None else eff
    return 1.0 - hop_transmission(spacing_km, l_att_km) * system_efficiency(eff)
