"""
Scenario files: YAML documents whose sections mirror the analytic
parameters and the simulation configuration. The schema is strict, an
unknown key anywhere is an error, and every duration is written with an
explicit unit:

    seed: 42
    duration: 10ms
    timing:
      tau_q: 100us
      tau_q_p: 50us
    topology:
      mode: grid
      modules:
        A: [0, 0]
        B: [1, 0]
    links:
      - endpoints: [A, B]
        attempt_period: 1us
        eta_trans: 0.1
    workload:
      arrival_period: 20us

A parsed scenario dumps back to a canonical document; parsing the dump
gives the same scenario again.
"""
import hashlib
import json
import os
import re
from dataclasses import dataclass, field, fields
from decimal import Decimal, InvalidOperation
from typing import Dict, Optional, Tuple

import yaml

from modular_qc.analysers.metrics import ThresholdSettings
from modular_qc.analytics import PLATFORM_CATALOG, PlatformProfile, ScalingParams, TimingParams
from modular_qc.errors import ConfigError
from modular_qc.ledger import LinkConfig, SelectionPolicy, composite_eta
from modular_qc.protocol import COMMIT_STAGES, FaultModel, ProtocolSettings, QubitPolicy, Stage
from modular_qc.simulation import KernelSettings, SimConfig
from modular_qc.topology import Topology
from modular_qc.workload import TraceArrival, WorkloadConfig

from .base import Transformer

DURATION_UNITS = {
    'ns': 1,
    'us': 10 ** 3,
    'ms': 10 ** 6,
    's': 10 ** 9,
}

_DURATION = re.compile(r'^\s*([0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?)\s*(ns|us|ms|s)\s*$')

SECTIONS = ('seed', 'duration', 'scaling', 'timing', 'topology', 'links', 'workload', 'faults', 'protocol',
            'kernel', 'threshold', 'platforms', 'annotations')

SCALING_KEYS = ('A', 'B', 'epsilon', 'gamma', 'eta_trans', 'D', 'kappa', 'eta_sweep')
TIMING_KEYS = ('tau_q', 'tau_q_p', 'tau_q_p_fraction', 'tau_decode', 'tau_ff', 'tau_route', 'alpha',
               'refractive_index_n', 'light_speed_c', 'safety_margin', 'code_distance', 'cycle')
TOPOLOGY_KEYS = ('mode', 'modules', 'per_unit_latency', 'edges', 'gate')
LINK_KEYS = ('endpoints', 'attempt_period', 'eta_trans', 'hop_etas', 'fidelity', 'fidelity_range')
WORKLOAD_KEYS = ('mode', 'arrival_period', 'start', 'participants', 'links_per_pair', 'max_transactions',
                 'trace', 'trace_file')
TRACE_KEYS = ('time', 'participants')
FAULT_KEYS = ('uniform',) + tuple(stage.name.lower() for stage in COMMIT_STAGES)
PROTOCOL_KEYS = ('local_entangle', 'measurement', 'query_latency', 'handshake_latency', 'jitter_fraction',
                 'multiplier', 'precheck', 'retry_count', 'retry_spacing', 'qubit_policy',
                 'stalled_window_as_erasure', 'per_hop_decode')
KERNEL_KEYS = ('sweep_period', 'snapshot_period', 'audit', 'selection_policy', 'min_fidelity', 'export_ledger')
THRESHOLD_KEYS = ('depolarizing_threshold', 'erasure_threshold', 'erasure_annotation', 'dominance_fraction',
                  'background_depolarizing_rate')
PLATFORM_KEYS = ('name', 'tau_q', 'tau_gate', 'printed_n_ops', 'profile')


def parse_duration(text, name='duration') -> int:
    """
    '2.5us' -> 2500. Anything that does not land on a whole nanosecond is
    rejected, never rounded.
    """
    if isinstance(text, bool) or not isinstance(text, str):
        raise ConfigError('{} must be a string with a unit (ns, us, ms, s), got {!r}'.format(name, text))

    match = _DURATION.match(text)
    if not match:
        raise ConfigError('{}: cannot parse duration {!r}'.format(name, text))

    try:
        value = Decimal(match.group(1)) * DURATION_UNITS[match.group(2)]
    except InvalidOperation:
        raise ConfigError('{}: cannot parse duration {!r}'.format(name, text))

    if value != value.to_integral_value():
        raise ConfigError('{}: {!r} is not a whole number of nanoseconds'.format(name, text))

    return int(value)


def format_duration(value_ns) -> str:
    """
    The canonical form, always in ns.
    """
    return '{}ns'.format(int(value_ns))


def _section(raw, name, allowed, default=None) -> Dict:
    section = raw.get(name, default)

    if section is None:
        return {}

    if not isinstance(section, dict):
        raise ConfigError('Section {} must be a mapping'.format(name))

    unknown = sorted(set(map(str, section)) - set(allowed))
    if unknown:
        raise ConfigError('Unknown key(s) in {}: {}'.format(name, ', '.join(unknown)))

    return section


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError('{} must be a number, got {!r}'.format(name, value))

    return value


def _integer(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError('{} must be an integer, got {!r}'.format(name, value))

    return value


def _flag(value, name):
    if not isinstance(value, bool):
        raise ConfigError('{} must be true or false, got {!r}'.format(name, value))

    return value


def _build(section, builder, **kwargs):
    """
    Turn the ValueError of a constructor into a config error naming the
    section.
    """
    try:
        return builder(**kwargs)
    except (ValueError, TypeError) as error:
        raise ConfigError('Invalid {} section: {}'.format(section, error))


@dataclass
class Scenario:
    """
    A parsed scenario file. The simulation parts are optional, the analytic
    commands only need the scaling and timing sections.
    """
    scaling: ScalingParams = field(default_factory=ScalingParams)
    timing: TimingParams = field(default_factory=TimingParams)
    threshold: ThresholdSettings = field(default_factory=ThresholdSettings)
    seed: Optional[int] = None
    duration_ns: Optional[int] = None
    topology: Optional[Topology] = None
    links: Tuple[LinkConfig, ...] = field(default_factory=tuple)
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    faults: FaultModel = field(default_factory=FaultModel)
    protocol: ProtocolSettings = field(default_factory=ProtocolSettings)
    kernel: KernelSettings = field(default_factory=KernelSettings)
    eta_sweep: Tuple[float, ...] = field(default_factory=tuple)
    platforms: Optional[Tuple[PlatformProfile, ...]] = None
    annotations: Dict = field(default_factory=dict)

    @property
    def catalog(self):
        """
        The custom platforms if any, the built-in catalog otherwise.
        """
        return self.platforms if self.platforms is not None else PLATFORM_CATALOG

    def sim_config(self, seed=None) -> SimConfig:
        """
        The simulation configuration. The seed given here overrides the one
        in the file.
        """
        seed = self.seed if seed is None else seed

        if seed is None:
            raise ConfigError('A simulation needs a seed, none in the scenario nor on the command line')

        if self.duration_ns is None:
            raise ConfigError('A simulation needs a duration')

        if self.topology is None:
            raise ConfigError('A simulation needs a topology section')

        config = SimConfig(topology=self.topology,
                           timing=self.timing,
                           duration_ns=self.duration_ns,
                           seed=seed,
                           links=self.links,
                           workload=self.workload,
                           faults=self.faults,
                           protocol=self.protocol,
                           kernel=self.kernel)
        config.validate()

        return config


class ScenarioTransformer(Transformer):
    """
    Transform a raw scenario document, as loaded from YAML, into a Scenario.
    """
    def __init__(self, base_dir=None):
        """
        Trace files are looked up relative to base_dir, usually the folder of
        the scenario file.
        """
        self.base_dir = base_dir

    def load(self, path) -> Scenario:
        """
        Read and parse a scenario file.
        """
        try:
            with open(path) as fhandler:
                raw = yaml.safe_load(fhandler)
        except (OSError, yaml.YAMLError) as error:
            raise ConfigError('Cannot read scenario {}: {}'.format(path, error))

        return ScenarioTransformer(base_dir=os.path.dirname(os.path.abspath(path))).apply(raw)

    def apply(self, raw) -> Scenario:
        """
        Validate every section and build the typed configuration.
        """
        if raw is None:
            raw = {}

        if not isinstance(raw, dict):
            raise ConfigError('A scenario must be a mapping of sections')

        unknown = sorted(set(map(str, raw)) - set(SECTIONS))
        if unknown:
            raise ConfigError('Unknown section(s): {}'.format(', '.join(unknown)))

        scenario = Scenario()

        if raw.get('seed') is not None:
            scenario.seed = _integer(raw['seed'], 'seed')

        if raw.get('duration') is not None:
            scenario.duration_ns = parse_duration(raw['duration'], 'duration')

        scenario.scaling, scenario.eta_sweep = self._scaling(raw)
        scenario.timing = self._timing(raw)
        scenario.threshold = self._threshold(raw)
        scenario.protocol = self._protocol(raw)
        scenario.kernel = self._kernel(raw)
        scenario.faults = self._faults(raw)
        scenario.workload = self._workload(raw)

        if raw.get('topology') is not None:
            scenario.topology = self._topology(raw, scenario.timing)

        scenario.links = self._links(raw)

        if raw.get('platforms') is not None:
            scenario.platforms = self._platforms(raw)

        annotations = raw.get('annotations') or {}
        if not isinstance(annotations, dict):
            raise ConfigError('Section annotations must be a mapping')
        scenario.annotations = dict(annotations)

        if scenario.topology is not None:
            self._check_references(scenario)

        return scenario

    @staticmethod
    def _scaling(raw):
        section = _section(raw, 'scaling', SCALING_KEYS)
        kwargs = {key: _number(value, 'scaling.' + key) for key, value in section.items() if key != 'eta_sweep'}

        if 'D' in kwargs:
            kwargs['D'] = _integer(kwargs['D'], 'scaling.D')

        sweep = section.get('eta_sweep') or []
        if not isinstance(sweep, list):
            raise ConfigError('scaling.eta_sweep must be a list')

        sweep = tuple(float(_number(eta, 'scaling.eta_sweep')) for eta in sweep)
        for eta in sweep:
            if not 0 < eta <= 1:
                raise ConfigError('scaling.eta_sweep values must be in (0, 1], got {}'.format(eta))

        return _build('scaling', ScalingParams, **kwargs), sweep

    @staticmethod
    def _timing(raw):
        section = _section(raw, 'timing', TIMING_KEYS)
        kwargs = {}

        for key in ('tau_q', 'tau_q_p', 'tau_decode', 'tau_ff', 'tau_route'):
            if key in section:
                kwargs[key] = parse_duration(section[key], 'timing.' + key)

        for key in ('tau_q_p_fraction', 'alpha', 'refractive_index_n', 'light_speed_c', 'safety_margin'):
            if key in section:
                kwargs[key] = _number(section[key], 'timing.' + key)

        if 'code_distance' in section:
            kwargs['code_distance'] = _integer(section['code_distance'], 'timing.code_distance')

        if 'cycle' in section:
            kwargs['cycle_ns'] = parse_duration(section['cycle'], 'timing.cycle')

        return _build('timing', TimingParams, **kwargs)

    @staticmethod
    def _threshold(raw):
        section = _section(raw, 'threshold', THRESHOLD_KEYS)
        kwargs = {key: _number(value, 'threshold.' + key) for key, value in section.items()}

        return _build('threshold', ThresholdSettings, **kwargs)

    @staticmethod
    def _protocol(raw):
        section = _section(raw, 'protocol', PROTOCOL_KEYS)
        names = {
            'local_entangle': 'local_entangle_ns',
            'measurement': 'measurement_ns',
            'query_latency': 'query_ns',
            'handshake_latency': 'handshake_ns',
            'retry_spacing': 'retry_spacing_ns',
        }
        kwargs = {}

        for key, name in names.items():
            if key in section:
                kwargs[name] = parse_duration(section[key], 'protocol.' + key)

        for key in ('jitter_fraction', 'multiplier'):
            if key in section:
                kwargs[key] = _number(section[key], 'protocol.' + key)

        for key in ('precheck', 'stalled_window_as_erasure', 'per_hop_decode'):
            if key in section:
                kwargs[key] = _flag(section[key], 'protocol.' + key)

        if 'retry_count' in section:
            kwargs['retry_count'] = _integer(section['retry_count'], 'protocol.retry_count')

        if 'qubit_policy' in section:
            try:
                kwargs['qubit_policy'] = QubitPolicy(section['qubit_policy'])
            except ValueError:
                raise ConfigError('protocol.qubit_policy must be measure or reset, got {!r}'.format(
                    section['qubit_policy']))

        return _build('protocol', ProtocolSettings, **kwargs)

    @staticmethod
    def _kernel(raw):
        section = _section(raw, 'kernel', KERNEL_KEYS)
        kwargs = {}

        for key in ('sweep_period', 'snapshot_period'):
            if key in section:
                kwargs[key + '_ns'] = parse_duration(section[key], 'kernel.' + key)

        for key in ('audit', 'export_ledger'):
            if key in section:
                kwargs[key] = _flag(section[key], 'kernel.' + key)

        if 'min_fidelity' in section:
            kwargs['min_fidelity'] = _number(section['min_fidelity'], 'kernel.min_fidelity')

        if 'selection_policy' in section:
            try:
                kwargs['selection_policy'] = SelectionPolicy(section['selection_policy'])
            except ValueError:
                raise ConfigError('kernel.selection_policy must be youngest_first or oldest_first, got {!r}'.format(
                    section['selection_policy']))

        return _build('kernel', KernelSettings, **kwargs)

    @staticmethod
    def _faults(raw):
        section = _section(raw, 'faults', FAULT_KEYS)

        if 'uniform' in section:
            if len(section) > 1:
                raise ConfigError('faults: uniform cannot be combined with per-stage probabilities')

            return _build('faults', FaultModel.uniform, probability=_number(section['uniform'], 'faults.uniform'))

        probabilities = {int(Stage[key.upper()]): _number(value, 'faults.' + key) for key, value in section.items()}
        return _build('faults', FaultModel, probabilities=probabilities)

    def _trace(self, section):
        if 'trace' in section and 'trace_file' in section:
            raise ConfigError('workload: give either trace or trace_file, not both')

        arrivals = section.get('trace')

        if 'trace_file' in section:
            path = section['trace_file']
            if self.base_dir and not os.path.isabs(path):
                path = os.path.join(self.base_dir, path)

            try:
                with open(path) as fhandler:
                    arrivals = yaml.safe_load(fhandler)
            except (OSError, yaml.YAMLError) as error:
                raise ConfigError('Cannot read trace file {}: {}'.format(path, error))

        if arrivals is None:
            return ()

        if not isinstance(arrivals, list):
            raise ConfigError('A trace is a list of arrivals')

        trace = []
        for arrival in arrivals:
            arrival = _section({'trace': arrival}, 'trace', TRACE_KEYS)

            participants = arrival.get('participants')
            if not isinstance(participants, list):
                raise ConfigError('Each trace arrival needs a list of participants')

            trace.append(TraceArrival(time_ns=parse_duration(arrival.get('time'), 'trace.time'),
                                      participants=tuple(str(module) for module in participants)))

        return tuple(trace)

    def _workload(self, raw):
        section = _section(raw, 'workload', WORKLOAD_KEYS)
        kwargs = {}

        for key in ('mode', 'participants'):
            if key in section:
                kwargs[key] = str(section[key])

        if 'arrival_period' in section:
            kwargs['arrival_period_ns'] = parse_duration(section['arrival_period'], 'workload.arrival_period')

        if 'start' in section:
            kwargs['start_ns'] = parse_duration(section['start'], 'workload.start')

        for key in ('links_per_pair', 'max_transactions'):
            if section.get(key) is not None:
                kwargs[key] = _integer(section[key], 'workload.' + key)

        kwargs['trace'] = self._trace(section)

        return _build('workload', WorkloadConfig, **kwargs)

    @staticmethod
    def _topology(raw, timing):
        section = _section(raw, 'topology', TOPOLOGY_KEYS)
        mode = section.get('mode', Topology.GRID)

        gate = section.get('gate') or {}
        if not isinstance(gate, dict):
            raise ConfigError('topology.gate must map modules to gate times')
        gate_ns = {str(module): parse_duration(value, 'topology.gate') for module, value in gate.items()}

        if mode == Topology.GRID:
            if 'edges' in section:
                raise ConfigError('topology: a grid has modules, not edges')

            modules = section.get('modules')
            if not isinstance(modules, dict) or not modules:
                raise ConfigError('topology.modules must map each module to its [x, y] position')

            positions = {}
            for module, position in modules.items():
                if not isinstance(position, list) or len(position) != 2:
                    raise ConfigError('topology.modules: {} needs an [x, y] position'.format(module))
                positions[str(module)] = tuple(_integer(value, 'topology.modules') for value in position)

            per_unit = timing.per_unit_latency
            if 'per_unit_latency' in section:
                per_unit = parse_duration(section['per_unit_latency'], 'topology.per_unit_latency')

            return _build('topology', Topology, positions=positions, per_unit_latency_ns=per_unit, gate_ns=gate_ns)

        if mode == Topology.GRAPH:
            if 'modules' in section or 'per_unit_latency' in section:
                raise ConfigError('topology: a graph has edges, not grid modules')

            edges = []
            for edge in section.get('edges') or []:
                if not isinstance(edge, list) or len(edge) != 3:
                    raise ConfigError('topology.edges entries are [module_i, module_j, latency]')
                edges.append((str(edge[0]), str(edge[1]), parse_duration(edge[2], 'topology.edges')))

            return _build('topology', Topology, edges=edges, gate_ns=gate_ns)

        raise ConfigError('topology.mode must be grid or graph, got {!r}'.format(mode))

    @staticmethod
    def _links(raw):
        links = raw.get('links') or []

        if not isinstance(links, list):
            raise ConfigError('Section links must be a list')

        parsed = []
        for link in links:
            section = _section({'links': link}, 'links', LINK_KEYS)

            endpoints = section.get('endpoints')
            if not isinstance(endpoints, list) or len(endpoints) != 2:
                raise ConfigError('Each link needs two endpoints')

            if ('eta_trans' in section) == ('hop_etas' in section):
                raise ConfigError('Link {}: give either eta_trans or hop_etas'.format(endpoints))

            if 'hop_etas' in section:
                hops = section['hop_etas']
                if not isinstance(hops, list):
                    raise ConfigError('Link {}: hop_etas must be a list'.format(endpoints))
                eta = _build('links', composite_eta, hop_etas=[_number(hop, 'links.hop_etas') for hop in hops])
            else:
                eta = _number(section['eta_trans'], 'links.eta_trans')

            if 'fidelity' in section and 'fidelity_range' in section:
                raise ConfigError('Link {}: give either fidelity or fidelity_range'.format(endpoints))

            fidelity_min = fidelity_max = 1.0
            if 'fidelity' in section:
                fidelity_min = fidelity_max = _number(section['fidelity'], 'links.fidelity')
            elif 'fidelity_range' in section:
                bounds = section['fidelity_range']
                if not isinstance(bounds, list) or len(bounds) != 2:
                    raise ConfigError('Link {}: fidelity_range is [min, max]'.format(endpoints))
                fidelity_min, fidelity_max = (_number(bound, 'links.fidelity_range') for bound in bounds)

            parsed.append(_build('links', LinkConfig,
                                 endpoints=(str(endpoints[0]), str(endpoints[1])),
                                 attempt_period_ns=parse_duration(section.get('attempt_period'),
                                                                  'links.attempt_period'),
                                 eta_trans=eta,
                                 fidelity_min=fidelity_min,
                                 fidelity_max=fidelity_max))

        return tuple(parsed)

    @staticmethod
    def _platforms(raw):
        platforms = raw['platforms']

        if not isinstance(platforms, list):
            raise ConfigError('Section platforms must be a list')

        def _range(section, key):
            bounds = section.get(key)
            if bounds is None:
                return None, None

            if not isinstance(bounds, list) or len(bounds) != 2:
                raise ConfigError('platforms.{} is [min, max]'.format(key))

            return tuple(parse_duration(bound, 'platforms.' + key) / 1e9 for bound in bounds)

        parsed = []
        for platform in platforms:
            section = _section({'platforms': platform}, 'platforms', PLATFORM_KEYS)

            if 'name' not in section or 'tau_q' not in section:
                raise ConfigError('Each platform needs a name and a tau_q range')

            tau_q_min, tau_q_max = _range(section, 'tau_q')
            tau_gate_min, tau_gate_max = _range(section, 'tau_gate')

            parsed.append(_build('platforms', PlatformProfile,
                                 name=str(section['name']),
                                 tau_q_min=tau_q_min,
                                 tau_q_max=tau_q_max,
                                 tau_gate_min=tau_gate_min,
                                 tau_gate_max=tau_gate_max,
                                 printed_n_ops=str(section.get('printed_n_ops', '')),
                                 profile=str(section.get('profile', ''))))

        return tuple(parsed)

    @staticmethod
    def _check_references(scenario):
        for link in scenario.links:
            for module in link.endpoints:
                if module not in scenario.topology:
                    raise ConfigError('Link {} references unknown module {}'.format(link.name, module))

        for arrival in scenario.workload.trace:
            for module in arrival.participants:
                if module not in scenario.topology:
                    raise ConfigError('Trace arrival at {} ns references unknown module {}'.format(
                        arrival.time_ns, module))


def _dump_fields(value, renames, durations=()):
    """
    All dataclass fields, renamed, with the durations in canonical form.
    """
    section = {}

    for item in fields(value):
        name = renames.get(item.name, item.name)
        data = getattr(value, item.name)

        if item.name in durations:
            data = format_duration(data)
        elif hasattr(data, 'value'):
            data = data.value

        section[name] = data

    return section


def dump(scenario: Scenario) -> Dict:
    """
    The canonical document of a scenario: every section and key written
    out, durations in ns.
    """
    document = {}

    if scenario.seed is not None:
        document['seed'] = scenario.seed

    if scenario.duration_ns is not None:
        document['duration'] = format_duration(scenario.duration_ns)

    scaling = _dump_fields(scenario.scaling, {})
    scaling['eta_sweep'] = list(scenario.eta_sweep)
    document['scaling'] = scaling

    document['timing'] = _dump_fields(scenario.timing, {'cycle_ns': 'cycle'},
                                      durations=('tau_q', 'tau_q_p', 'tau_decode', 'tau_ff', 'tau_route',
                                                 'cycle_ns'))

    if scenario.topology is not None:
        topology = scenario.topology.as_dict()

        if scenario.topology.mode == Topology.GRAPH:
            topology['edges'] = [[i, j, format_duration(latency)] for i, j, latency in topology['edges']]
        elif scenario.topology.per_unit_latency_ns != scenario.timing.per_unit_latency:
            topology['per_unit_latency'] = format_duration(scenario.topology.per_unit_latency_ns)

        if 'gate_ns' in topology:
            topology['gate'] = {module: format_duration(value) for module, value in topology.pop('gate_ns').items()}

        document['topology'] = topology

    document['links'] = [{
        'endpoints': list(link.endpoints),
        'attempt_period': format_duration(link.attempt_period_ns),
        'eta_trans': link.eta_trans,
        'fidelity_range': [link.fidelity_min, link.fidelity_max],
    } for link in scenario.links]

    workload = _dump_fields(scenario.workload,
                            {'arrival_period_ns': 'arrival_period', 'start_ns': 'start'},
                            durations=('arrival_period_ns', 'start_ns'))
    workload['trace'] = [{'time': format_duration(arrival.time_ns), 'participants': list(arrival.participants)}
                         for arrival in scenario.workload.trace]
    document['workload'] = workload

    document['faults'] = {Stage(stage).name.lower(): probability
                          for stage, probability in sorted(scenario.faults.probabilities.items())}

    document['protocol'] = _dump_fields(scenario.protocol,
                                        {'local_entangle_ns': 'local_entangle',
                                         'measurement_ns': 'measurement',
                                         'query_ns': 'query_latency',
                                         'handshake_ns': 'handshake_latency',
                                         'retry_spacing_ns': 'retry_spacing'},
                                        durations=('local_entangle_ns', 'measurement_ns', 'query_ns',
                                                   'handshake_ns', 'retry_spacing_ns'))

    document['kernel'] = _dump_fields(scenario.kernel,
                                      {'sweep_period_ns': 'sweep_period', 'snapshot_period_ns': 'snapshot_period'},
                                      durations=('sweep_period_ns', 'snapshot_period_ns'))

    document['threshold'] = _dump_fields(scenario.threshold, {})

    if scenario.platforms is not None:
        document['platforms'] = []

        for platform in scenario.platforms:
            entry = {
                'name': platform.name,
                'tau_q': [format_duration(round(platform.tau_q_min * 1e9)),
                          format_duration(round(platform.tau_q_max * 1e9))],
            }

            if not platform.memory_only:
                entry['tau_gate'] = [format_duration(round(platform.tau_gate_min * 1e9)),
                                     format_duration(round(platform.tau_gate_max * 1e9))]

            entry['printed_n_ops'] = platform.printed_n_ops
            entry['profile'] = platform.profile
            document['platforms'].append(entry)

    document['annotations'] = dict(scenario.annotations)

    return document


def config_hash(scenario: Scenario) -> str:
    """
    SHA-256 of the canonical JSON encoding of the dump.
    """
    canonical = json.dumps(dump(scenario), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode()).hexdigest()
