# pylint: disable=missing-docstring
from .scaling_model import ScalingParams, PlatformProfile, PLATFORM_CATALOG, ArchitecturePhase
from .scaling_model import cost_homogeneous, cost_modular, cost_ratio
from .scaling_model import crossover_condition, crossover_scale, sweep_crossover
from .scaling_model import architecture_phase, logical_qubits, expected_attempts, ops_per_coherence
from .timing_bounds import TimingParams, SPEED_OF_LIGHT
from .timing_bounds import locality_bound, coordination_latency, coordination_curve
from .timing_bounds import coordination_wall, wall_sensitivity, wall_precedes_crossover
