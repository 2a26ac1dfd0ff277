"""
Timing limits of classical control: the causal locality bound on the
control radius and the coordination wall of a monolithic layout, where the
latency tau_c(N) = tau_decode + tau_ff + alpha * sqrt(N) * tau_route uses up
the allotted share of the coherence time.

Durations are integer nanoseconds at the boundary; the math inside is done
with floats and results are reported as floats.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from modular_qc.analytics.scaling_model import ScalingParams, crossover_scale
from modular_qc.errors import InfeasibleWallError, NoPositiveRadiusError

SPEED_OF_LIGHT = 2.998e8

# tau_q^(p) ~ 0.001 tau_q for a 99.9% fidelity retention
DEFAULT_DEADLINE_FRACTION = 0.001


@dataclass(frozen=True)
class TimingParams:
    """
    The default values describe a monolithic superconducting array: 100 us
    of coherence, a 2.5 us hardware decoder, 0.5 us of feedforward and
    115 ns of control distribution per lattice unit with Manhattan routing.
    """
    tau_q: int = 100000
    tau_q_p: Optional[int] = None
    tau_decode: int = 2500
    tau_ff: int = 500
    tau_route: float = 115
    alpha: float = math.sqrt(2)
    refractive_index_n: float = 1.5
    light_speed_c: float = SPEED_OF_LIGHT
    safety_margin: float = 0.5
    tau_q_p_fraction: float = DEFAULT_DEADLINE_FRACTION
    # Recorded as scenario annotations, they never enter a formula
    code_distance: int = 31
    cycle_ns: int = 1000

    def __post_init__(self):
        if self.tau_q_p is None:
            if not 0 < self.tau_q_p_fraction <= 1:
                raise ValueError('Deadline fraction must be in (0, 1], got {}'.format(self.tau_q_p_fraction))

            # Round half-up at the integer boundary
            object.__setattr__(self, 'tau_q_p', int(math.floor(self.tau_q * self.tau_q_p_fraction + 0.5)))

        if self.tau_q <= 0:
            raise ValueError('Coherence time must be positive, got {}'.format(self.tau_q))

        for name in ('tau_q_p', 'tau_decode', 'tau_ff', 'tau_route'):
            if getattr(self, name) < 0:
                raise ValueError('{} must be >= 0, got {}'.format(name, getattr(self, name)))

        if self.tau_q_p > self.tau_q:
            raise ValueError('tau_q_p ({}) cannot exceed tau_q ({})'.format(self.tau_q_p, self.tau_q))

        if self.alpha < 1:
            raise ValueError('Routing elongation alpha must be >= 1, got {}'.format(self.alpha))

        if self.refractive_index_n < 1:
            raise ValueError('Refractive index must be >= 1, got {}'.format(self.refractive_index_n))

        if not 0 < self.safety_margin <= 1:
            raise ValueError('Safety margin must be in (0, 1], got {}'.format(self.safety_margin))

    @property
    def per_unit_latency(self):
        """
        Latency of one lattice unit of grid routing, in ns.
        """
        return self.alpha * self.tau_route


def locality_bound(params: TimingParams) -> float:
    """
    L_ctrl_max = c / (2 n) * (tau_q^(p) - tau_decode - tau_ff), in meters.
    """
    budget = params.tau_q_p - params.tau_decode - params.tau_ff

    if budget < 0:
        raise NoPositiveRadiusError(-budget)

    return params.light_speed_c / (2 * params.refractive_index_n) * budget * 1e-9


def coordination_latency(params: TimingParams, n_qubits: float) -> float:
    """
    tau_c(N) in ns for a planar lattice of N qubits.
    """
    if n_qubits < 1:
        raise ValueError('The number of qubits must be >= 1, got {}'.format(n_qubits))

    return params.tau_decode + params.tau_ff + params.alpha * math.sqrt(n_qubits) * params.tau_route


def coordination_curve(params: TimingParams, n_values) -> List[Tuple[float, float]]:
    """
    Sample tau_c(N) for plotting.
    """
    return [(float(n), coordination_latency(params, n)) for n in n_values]


def _wall(params: TimingParams, tau_route: float) -> float:
    residual = params.safety_margin * params.tau_q - params.tau_decode - params.tau_ff

    if residual <= 0:
        raise InfeasibleWallError(residual, 'Decode and feedforward ({} ns) exceed the allotted coherence '
                                            'budget ({} ns)'.format(params.tau_decode + params.tau_ff,
                                                                    params.safety_margin * params.tau_q))

    if tau_route <= 0 or params.alpha <= 0:
        raise ValueError('Routing latency and elongation must be positive to place a wall')

    wall = (residual / (params.alpha * tau_route)) ** 2

    if wall < 1:
        raise InfeasibleWallError(residual)

    return wall


def coordination_wall(params: TimingParams) -> float:
    """
    The unique N* where tau_c(N*) = safety_margin * tau_q.
    """
    return _wall(params, params.tau_route)


def wall_sensitivity(params: TimingParams, route_min: float, route_max: float,
                     steps: int) -> List[Tuple[float, float]]:
    """
    Evenly spaced tau_route values, both ends included, each with its wall.
    """
    if not 0 < route_min <= route_max:
        raise ValueError('Invalid routing latency range {} - {}'.format(route_min, route_max))

    if steps < 2:
        raise ValueError('At least two steps are needed, got {}'.format(steps))

    return [(float(route), _wall(params, float(route))) for route in np.linspace(route_min, route_max, steps)]


def wall_precedes_crossover(params: TimingParams, scaling: ScalingParams) -> Optional[bool]:
    """
    The coordination wall is expected to hit before the economic crossover.
    None when the scaling model has no finite crossover.
    """
    n_c = crossover_scale(scaling)

    if n_c is None:
        return None

    return coordination_wall(params) < n_c
