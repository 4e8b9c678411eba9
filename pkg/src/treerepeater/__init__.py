"""Secret-key rates of one-way quantum repeaters built from photonic tree cluster states."""

__version__ = "0.1.0"

from .channel import ChannelParams, EfficiencyParams, hop_transmission, single_photon_loss, system_efficiency
from .config import HardwareParams
from .errors import DomainError, InfeasibleConfigError, ParameterError
from .mc import McConfig, mc_indirect_z, mc_transmission
from .optimize import OptimizationOutcome, OptimizationProblem, optimize, sweep_distance, sweep_emitters
from .qkd import ErrorParams, binary_entropy, depolarize, key_fraction, qber_from_error
from .rate import RateResult, RepeaterConfig, evaluate
from .timing import EMITTER_PLUS_ANCILLA, MULTIPLEXED, SINGLE_EMITTER, GateTimes, Scheme, emitter_count, generation_time
from .tree import TreeParams, indirect_z_success, transmission_probability
