"""Hardware parameter set and the flat ``key = value`` config-file format."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .channel import L_ATT_KM, EfficiencyParams
from .timing import GateTimes

# config-file key -> (section, attribute)
CONFIG_KEYS = {
    "t_p_ns": ("gates", "t_p"),
    "t_e_ns": ("gates", "t_e"),
    "t_cz_ns": ("gates", "t_cz"),
    "beta": ("gates", "beta"),
    "eta_c": ("efficiencies", "eta_c"),
    "eta_w": ("efficiencies", "eta_w"),
    "eta_f": ("efficiencies", "eta_f"),
    "eta_d": ("efficiencies", "eta_d"),
    "l_att_km": ("hardware", "l_att_km"),
    "eps_r": ("hardware", "eps_r"),
    "t2_s": ("hardware", "t2_s"),
}


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(message)
        self.key = key


@dataclass(frozen=True)
class HardwareParams:
    """Everything about the repeater hardware; defaults reproduce the table values.

    ``t2_s`` (spin coherence) is carried for bookkeeping only; no decoherence
    penalty is applied anywhere.
    """

    gates: GateTimes = field(default_factory=GateTimes)
    efficiencies: EfficiencyParams = field(default_factory=EfficiencyParams)
    l_att_km: float = L_ATT_KM
    eps_r: float = 1e-5
    t2_s: float = 1.0

    def as_flat(self) -> dict[str, float]:
        out = {}
        for key, (section, attr) in CONFIG_KEYS.items():
            owner = self if section == "hardware" else getattr(self, section)
            out[key] = getattr(owner, attr)
        return out

    @classmethod
    def from_flat(cls, values: dict[str, float]) -> "HardwareParams":
        base = cls().as_flat()
        for key in values:
            if key not in CONFIG_KEYS:
                raise ConfigError(key, "unknown parameter")
        base.update(values)
        sections: dict[str, dict[str, float]] = {"gates": {}, "efficiencies": {}, "hardware": {}}
        for key, (section, attr) in CONFIG_KEYS.items():
            sections[section][attr] = base[key]
        for key in values:
            section, attr = CONFIG_KEYS[key]
            try:
                if section == "gates":
                    GateTimes(**{attr: values[key]})
                elif section == "efficiencies":
                    EfficiencyParams(**{attr: values[key]})
            except ValueError as exc:
                raise ConfigError(key, str(exc)) from exc
        hw = sections["hardware"]
        if not hw["l_att_km"] > 0:
            raise ConfigError("l_att_km", "must be positive")
        if not 0.0 <= hw["eps_r"] <= 1.0:
            raise ConfigError("eps_r", "must lie in [0, 1]")
        return cls(GateTimes(**sections["gates"]), EfficiencyParams(**sections["efficiencies"]), **hw)


def parse_config_text(text: str, source: str = "<config>") -> dict[str, float]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line, f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(key, f"{source}:{lineno}: unknown parameter")
        try:
            values[key] = float(value)
        except ValueError:
            raise ConfigError(key, f"{source}:{lineno}: cannot parse {value!r} as a number") from None
    return values


def load_config(path: str | Path) -> dict[str, float]:
    path = Path(path)
    return parse_config_text(path.read_text(), str(path))


def render_config(values: dict[str, float]) -> str:
    return "".join(f"{key} = {values[key]!r}\n" for key in CONFIG_KEYS if key in values)
