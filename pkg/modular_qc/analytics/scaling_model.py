"""
The space-time cost model of homogeneous vs. modular architectures.

A homogeneous (monolithic) substrate pays a superlinear coordination
penalty C_hom(N) = A * N^(1 + epsilon) while a modular one pays for its
interfaces C_mod(N) = (B / eta_trans) * N^gamma. Whenever 1 + epsilon > gamma
the two curves cross at a finite scale N_c and modularity wins beyond it.

All costs are dimensionless and normalized per fixed algorithmic depth.
"""
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Tuple

from modular_qc.errors import NoGateTimeError

# Typical surface-code physical-to-logical overhead
DEFAULT_KAPPA = 1e3


@dataclass(frozen=True)
class ScalingParams:
    """
    Prefactors and exponents of the cost model. D is only informational, it
    is not used to derive epsilon.
    """
    A: float = 1.0
    B: float = 100.0
    epsilon: float = 0.5
    gamma: float = 1.0
    eta_trans: float = 0.1
    D: int = 2
    kappa: float = DEFAULT_KAPPA

    def __post_init__(self):
        if self.A <= 0 or self.B <= 0:
            raise ValueError('Cost prefactors must be positive (A={}, B={})'.format(self.A, self.B))

        if not 0 < self.eta_trans <= 1:
            raise ValueError('Transduction efficiency must be in (0, 1], got {}'.format(self.eta_trans))

        # Information-theoretic floor, the modular routing cost is at least linear
        if self.gamma < 1:
            raise ValueError('Routing exponent gamma must be >= 1, got {}'.format(self.gamma))

        if self.epsilon <= 0:
            raise ValueError('Geometric exponent epsilon must be > 0, got {}'.format(self.epsilon))

        if self.D < 1:
            raise ValueError('Embedding dimension must be a positive integer, got {}'.format(self.D))

        if self.kappa <= 0:
            raise ValueError('Overhead factor kappa must be positive, got {}'.format(self.kappa))


@dataclass(frozen=True)
class PlatformProfile:
    """
    Coherence and gate time ranges of a physical platform, in seconds. The
    gate times are None for memory-only platforms.
    """
    name: str
    tau_q_min: float
    tau_q_max: float
    tau_gate_min: Optional[float] = None
    tau_gate_max: Optional[float] = None
    # As printed in the catalog, not reconciled with the computed ratio
    printed_n_ops: str = ''
    profile: str = ''

    def __post_init__(self):
        if self.tau_q_min <= 0 or self.tau_q_min > self.tau_q_max:
            raise ValueError('Invalid coherence range for {}: {} - {}'.format(self.name, self.tau_q_min,
                                                                              self.tau_q_max))

        if (self.tau_gate_min is None) != (self.tau_gate_max is None):
            raise ValueError('Platform {} must give both gate time bounds or neither'.format(self.name))

        if self.tau_gate_min is not None and (self.tau_gate_min <= 0 or self.tau_gate_min > self.tau_gate_max):
            raise ValueError('Invalid gate time range for {}: {} - {}'.format(self.name, self.tau_gate_min,
                                                                              self.tau_gate_max))

    @property
    def memory_only(self):
        """
        A platform without a gate time is only good for storage.
        """
        return self.tau_gate_min is None


PLATFORM_CATALOG = (
    PlatformProfile(name='Superconducting',
                    tau_q_min=50e-6, tau_q_max=500e-6,
                    tau_gate_min=20e-9, tau_gate_max=100e-9,
                    printed_n_ops='10^3-10^5',
                    profile='Fast logic, but severe crosstalk at scale'),
    PlatformProfile(name='Neutral Atom (Rydberg)',
                    tau_q_min=50e-6, tau_q_max=200e-6,
                    tau_gate_min=0.2e-6, tau_gate_max=2e-6,
                    printed_n_ops='10^2-10^3',
                    profile='Interaction mode; limited gate depth'),
    PlatformProfile(name='Neutral Atom (Hyperfine)',
                    tau_q_min=1.0, tau_q_max=10.0,
                    printed_n_ops='Storage',
                    profile='Exceptional memory; lacks direct logic'),
    PlatformProfile(name='Trapped Ion',
                    tau_q_min=1.0, tau_q_max=100.0,
                    tau_gate_min=1e-6, tau_gate_max=100e-6,
                    printed_n_ops='10^4-10^7',
                    profile='High fidelity, but slow logical clock cycle'),
)


class ArchitecturePhase(Enum):
    """
    Which architecture is cheaper at a given scale.
    """
    HOMOGENEOUS = 'homogeneous'
    MODULAR = 'modular'


def _check_qubits(n_qubits):
    if n_qubits < 1:
        raise ValueError('The number of qubits must be >= 1, got {}'.format(n_qubits))


def cost_homogeneous(params: ScalingParams, n_qubits: float) -> float:
    """
    C_hom(N) = A * N^(1 + epsilon)
    """
    _check_qubits(n_qubits)
    return params.A * math.pow(n_qubits, 1 + params.epsilon)


def cost_modular(params: ScalingParams, n_qubits: float) -> float:
    """
    C_mod(N) = (B / eta_trans) * N^gamma, the 1 / eta factor being the
    expected number of transduction retries per interface.
    """
    _check_qubits(n_qubits)
    return params.B / params.eta_trans * math.pow(n_qubits, params.gamma)


def cost_ratio(params: ScalingParams, n_qubits: float) -> float:
    """
    C_mod / C_hom, vanishing as N grows whenever a crossover exists.
    """
    return cost_modular(params, n_qubits) / cost_homogeneous(params, n_qubits)


def crossover_condition(params: ScalingParams) -> bool:
    """
    A finite crossover exists iff 1 + epsilon > gamma. The equality is
    excluded.
    """
    return 1 + params.epsilon > params.gamma


def crossover_scale(params: ScalingParams) -> Optional[float]:
    """
    N_c = ((B / A) / eta_trans)^(1 / ((1 + epsilon) - gamma)), or None when
    there is no finite crossover.
    """
    if not crossover_condition(params):
        return None

    base = params.B / params.A / params.eta_trans
    return math.pow(base, 1 / ((1 + params.epsilon) - params.gamma))


def sweep_crossover(params: ScalingParams, eta_values) -> List[Tuple[float, Optional[float]]]:
    """
    Recompute N_c for every transduction efficiency, keeping the input
    order. An invalid eta is rejected by ScalingParams itself.
    """
    return [(eta, crossover_scale(replace(params, eta_trans=eta))) for eta in eta_values]


def architecture_phase(params: ScalingParams, n_qubits: float) -> ArchitecturePhase:
    """
    Modular strictly beyond N_c, homogeneous otherwise.
    """
    _check_qubits(n_qubits)
    n_c = crossover_scale(params)

    if n_c is not None and n_qubits > n_c:
        return ArchitecturePhase.MODULAR

    return ArchitecturePhase.HOMOGENEOUS


def logical_qubits(n_qubits: float, kappa: float = DEFAULT_KAPPA) -> float:
    """
    N ~ kappa * N_L, only used to annotate outputs.
    """
    return n_qubits / kappa


def expected_attempts(eta: float) -> float:
    """
    The expected number of generation attempts until one success.
    """
    if not 0 < eta <= 1:
        raise ValueError('Success probability must be in (0, 1], got {}'.format(eta))

    return 1 / eta


def ops_per_coherence(profile: PlatformProfile) -> Tuple[float, float]:
    """
    N_ops ~ tau_q / tau_gate over the whole range: the worst case pairs the
    shortest coherence with the slowest gate and vice versa.
    """
    if profile.memory_only:
        raise NoGateTimeError('Platform {} is memory-only, it has no gate time'.format(profile.name))

    return profile.tau_q_min / profile.tau_gate_max, profile.tau_q_max / profile.tau_gate_min
