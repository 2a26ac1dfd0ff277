"""
The discrete-event simulation kernel.

This module owns the event loop and does the heavy lifting: it schedules the
background generation attempts on every link, lets transactions arrive,
drives the Reserve-Commit protocol and, once the run is over, hands the
result to the analysers and the reporters.

The clock is an integer number of nanoseconds. Every random draw comes from
a named sub-stream of the scenario seed:

    numpy.random.default_rng(SeedSequence(seed, spawn_key=(crc32(name),)))

with the names 'link:<i>|<j>', 'workload', 'faults' and 'jitter', so that
adding a link or changing the fault model does not perturb the other draws.
"""
import hashlib
import logging
import zlib
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from modular_qc.analysers import Analyser
from modular_qc.analysers.metrics import timing_violations
from modular_qc.analytics.timing_bounds import TimingParams
from modular_qc.errors import ConfigError, InvariantViolation
from modular_qc.events import EventKind, EventQueue
from modular_qc.ledger import EntanglementLedger, LinkConfig, SelectionPolicy
from modular_qc.protocol import FaultModel, ProtocolSettings, ReserveCommitProtocol, Stage
from modular_qc.protocol import required_links_for
from modular_qc.reporters import Reporter
from modular_qc.topology import Topology
from modular_qc.workload import RANDOM_LINK, TRACE, WorkloadConfig, WorkloadGenerator


def make_stream(seed, name):
    """
    A named, independent and stable random stream.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(name.encode()),)))


@dataclass(frozen=True)
class KernelSettings:
    """
    Expire sweeps run every microsecond by default; tuples are also checked
    lazily on query and reserve so correctness never depends on it.
    """
    sweep_period_ns: int = 1000
    snapshot_period_ns: int = 0
    audit: bool = False
    selection_policy: SelectionPolicy = SelectionPolicy.YOUNGEST_FIRST
    min_fidelity: float = 0.0
    export_ledger: bool = False

    def __post_init__(self):
        if self.sweep_period_ns < 0 or self.snapshot_period_ns < 0:
            raise ValueError('Sweep and snapshot periods must be >= 0')

        if not 0 <= self.min_fidelity <= 1:
            raise ValueError('Minimum fidelity must be in [0, 1], got {}'.format(self.min_fidelity))


@dataclass(frozen=True)
class SimConfig:
    """
    Everything a scenario run depends on.
    """
    topology: Topology
    timing: TimingParams
    duration_ns: int
    seed: int
    links: Tuple[LinkConfig, ...] = field(default_factory=tuple)
    workload: WorkloadConfig = field(default_factory=WorkloadConfig)
    faults: FaultModel = field(default_factory=FaultModel)
    protocol: ProtocolSettings = field(default_factory=ProtocolSettings)
    kernel: KernelSettings = field(default_factory=KernelSettings)

    def validate(self):
        """
        Reject the scenario before a single event runs.
        """
        if self.duration_ns <= 0:
            raise ConfigError('The scenario duration must be positive, got {} ns'.format(self.duration_ns))

        if self.seed is None or not 0 <= self.seed < 2 ** 64:
            raise ConfigError('The seed must be a 64-bit unsigned integer, got {}'.format(self.seed))

        if self.timing.tau_q_p <= 0:
            raise ConfigError('The tuple lifetime tau_q_p must be positive, got {} ns'.format(self.timing.tau_q_p))

        names = set()
        for link in self.links:
            for module in link.endpoints:
                if module not in self.topology:
                    raise ConfigError('Link {} references unknown module {}'.format(link.name, module))

            if link.name in names:
                raise ConfigError('Link {} is declared twice'.format(link.name))
            names.add(link.name)

        for arrival in self.workload.trace:
            for module in arrival.participants:
                if module not in self.topology:
                    raise ConfigError('Trace arrival at {} ns references unknown module {}'.format(
                        arrival.time_ns, module))

        if self.workload.enabled and self.workload.mode != TRACE:
            if self.workload.participants == RANDOM_LINK and not self.links:
                raise ConfigError('The random_link workload needs at least one link')

            if len(self.topology.modules) < 2:
                raise ConfigError('A workload needs at least two modules')


@dataclass
class RunResult:
    """
    The complete, ordered outcome of one run.
    """
    seed: int
    duration_ns: int
    end_ns: int
    event_counts: Dict[str, int]
    event_digest: str
    transactions: List[Dict]
    records: List[Dict]
    ledger_counts: Dict[str, int]
    tau_q_ns: int = 0
    tau_q_p_ns: int = 0
    snapshots: List[Dict] = field(default_factory=list)
    ledger: Optional[List[Dict]] = None
    analysers: List[Dict] = field(default_factory=list)

    def as_record(self):
        """
        The plain dict the analysers work on.
        """
        return {
            'seed': self.seed,
            'duration_ns': self.duration_ns,
            'end_ns': self.end_ns,
            'event_counts': self.event_counts,
            'event_digest': self.event_digest,
            'transactions': self.transactions,
            'records': self.records,
            'ledger_counts': self.ledger_counts,
            'tau_q_ns': self.tau_q_ns,
            'tau_q_p_ns': self.tau_q_p_ns,
            'snapshots': self.snapshots,
            'analysers': self.analysers,
        }


class Simulator:
    """
    Run one scenario, then pass its result through the analysers and the
    reporters.
    """
    def __init__(self, config: SimConfig, analysers=None, reporters=None):
        """
        The analysers are run in the given order over the result record, the
        output of an analyser being available to the next ones. The
        reporters publish the final record.
        """
        self.config = config

        self.analysers = []
        self.reporters = []

        def _init_member(member, value, kind):
            """
            Initialize all analysers and reporters.
            """
            if value:
                if isinstance(value, (list, tuple)):
                    setattr(self, member, list(value))
                else:
                    getattr(self, member).append(value)

                for type_check in getattr(self, member):
                    if not isinstance(type_check, kind):
                        raise TypeError('Invalid {} type: {}'.format(member, type(type_check).__name__))

        _init_member('analysers', analysers, Analyser)
        _init_member('reporters', reporters, Reporter)

        self.queue = EventQueue()
        self.ledger = None
        self.protocol = None
        self.workload = None
        self.link_streams = {}
        self.event_counts = {kind.value: 0 for kind in EventKind}
        self.snapshots = []
        self._digest = hashlib.sha256()

    def _setup(self):
        config = self.config
        kernel = config.kernel

        self.ledger = EntanglementLedger(lifetime_ns=config.timing.tau_q_p,
                                         policy=kernel.selection_policy,
                                         min_fidelity=kernel.min_fidelity)

        self.protocol = ReserveCommitProtocol(ledger=self.ledger,
                                              topology=config.topology,
                                              timing=config.timing,
                                              settings=config.protocol,
                                              faults=config.faults,
                                              fault_rng=make_stream(config.seed, 'faults'),
                                              jitter_rng=make_stream(config.seed, 'jitter'),
                                              schedule=self.queue.insert,
                                              audit=kernel.audit)

        self.workload = WorkloadGenerator(config.workload, config.topology.modules, config.links,
                                          make_stream(config.seed, 'workload'))

        for index, link in enumerate(config.links):
            self.link_streams[index] = make_stream(config.seed, link.name)
            self.queue.insert(0, EventKind.GENERATION_ATTEMPT, index)

        if config.workload.enabled:
            if config.workload.mode == TRACE:
                for arrival in self.workload.schedule_trace(config.duration_ns):
                    self.queue.insert(arrival.time_ns, EventKind.TRANSACTION_ARRIVAL,
                                      {'participants': arrival.participants})

            elif config.workload.start_ns < config.duration_ns:
                self.queue.insert(config.workload.start_ns, EventKind.TRANSACTION_ARRIVAL, None)

        if kernel.sweep_period_ns:
            self.queue.insert(kernel.sweep_period_ns, EventKind.EXPIRE_SWEEP)

        if kernel.snapshot_period_ns:
            self.queue.insert(kernel.snapshot_period_ns, EventKind.METRICS_SNAPSHOT)

    def _periodic(self, now_ns, period_ns, kind):
        if now_ns + period_ns < self.config.duration_ns:
            self.queue.insert(now_ns + period_ns, kind)

    def _on_generation_attempt(self, now_ns, index):
        link = self.config.links[index]
        self.ledger.generate(link, now_ns, self.link_streams[index])

        if now_ns + link.attempt_period_ns < self.config.duration_ns:
            self.queue.insert(now_ns + link.attempt_period_ns, EventKind.GENERATION_ATTEMPT, index)

    def _on_transaction_arrival(self, now_ns, payload):
        workload = self.config.workload

        if payload is None:
            # A fresh fixed-rate arrival, which also sets up the next one
            participants = self.workload.draw_participants()
            self.workload.issued += 1
            upcoming = self.workload.next_arrival(now_ns, self.config.duration_ns)

            if upcoming is not None:
                self.queue.insert(upcoming, EventKind.TRANSACTION_ARRIVAL, None)

            parent_txn_id, attempt = None, 0

        else:
            participants = payload['participants']
            parent_txn_id, attempt = payload.get('parent_txn_id'), payload.get('attempt', 0)

        txn = self.protocol.new_transaction(participants,
                                            required_links_for(list(participants), workload.links_per_pair),
                                            now_ns,
                                            parent_txn_id=parent_txn_id,
                                            attempt=attempt)
        self.protocol.submit(txn, now_ns)

    def _on_stage_complete(self, now_ns, payload):
        txn_id, stage = payload
        self.protocol.on_stage_complete(txn_id, Stage(stage), now_ns)

    def _on_expire_sweep(self, now_ns, _):
        self.protocol.sweep(now_ns)
        self._periodic(now_ns, self.config.kernel.sweep_period_ns, EventKind.EXPIRE_SWEEP)

    def _on_metrics_snapshot(self, now_ns, _):
        counts = self.ledger.counts()
        counts['time_ns'] = now_ns
        counts['active_transactions'] = len(self.protocol.active)
        self.snapshots.append(counts)
        self._periodic(now_ns, self.config.kernel.snapshot_period_ns, EventKind.METRICS_SNAPSHOT)

    def _dispatch(self, event):
        """
        The event handler itself.
        """
        handlers = {
            EventKind.GENERATION_ATTEMPT: self._on_generation_attempt,
            EventKind.TRANSACTION_ARRIVAL: self._on_transaction_arrival,
            EventKind.STAGE_COMPLETE: self._on_stage_complete,
            EventKind.EXPIRE_SWEEP: self._on_expire_sweep,
            EventKind.METRICS_SNAPSHOT: self._on_metrics_snapshot,
        }

        self.event_counts[event.kind.value] += 1
        self._digest.update('{},{},{}\n'.format(event.time_ns, event.seq, event.kind.value).encode())

        handlers[event.kind](event.time_ns, event.payload)

    def _check_conservation(self, end_ns):
        counts = self.ledger.counts()

        if counts['reserved'] or self.protocol.active:
            raise InvariantViolation('{} tuples still reserved by {} transactions at {} ns'.format(
                counts['reserved'], len(self.protocol.active), end_ns))

        if not self.ledger.conserved():
            raise InvariantViolation('Tuple conservation broken: {}'.format(counts))

        return counts

    def run(self) -> RunResult:
        """
        Execute every event before the end of the scenario, then let the
        transactions in flight drain to a terminal state.
        """
        self.config.validate()
        self._setup()

        duration_ns = self.config.duration_ns
        end_ns = 0

        logging.info('Running scenario for %d ns with seed %d', duration_ns, self.config.seed)

        while self.queue:
            event = self.queue.pop()

            # Past the horizon only the running transactions make progress
            if event.time_ns >= duration_ns and event.kind != EventKind.STAGE_COMPLETE:
                continue

            end_ns = event.time_ns
            self._dispatch(event)

        end_ns = max(end_ns, duration_ns)
        self.ledger.expire_sweep(end_ns)
        counts = self._check_conservation(end_ns)

        transactions = [txn.as_dict() for txn in self.protocol.finished]
        logging.info('Scenario done at %d ns: %d tuples generated, %d transactions, %d events',
                     end_ns, counts['generated'], len(transactions), sum(self.event_counts.values()))

        result = RunResult(seed=self.config.seed,
                           duration_ns=duration_ns,
                           end_ns=end_ns,
                           event_counts=dict(self.event_counts),
                           event_digest=self._digest.hexdigest(),
                           transactions=transactions,
                           records=[record.as_dict() for record in self.protocol.records],
                           ledger_counts=counts,
                           tau_q_ns=self.config.timing.tau_q,
                           tau_q_p_ns=self.config.timing.tau_q_p,
                           snapshots=self.snapshots,
                           ledger=self.ledger.snapshot() if self.config.kernel.export_ledger else None)

        record = result.as_record()

        # Note that the order of analysers is important cause the output of an
        # analyser can be the input of the next one
        for analyser in self.analysers:
            record = analyser.run(record)

        result.analysers = record['analysers']

        for reporter in self.reporters:
            reporter.publish(record)

        return result


def run_scenario(config: SimConfig, analysers=None, reporters=None) -> RunResult:
    """
    Validate and run one scenario.
    """
    return Simulator(config, analysers=analysers, reporters=reporters).run()


def assert_timing_contract(result: RunResult, timing: TimingParams) -> List[Dict]:
    """
    tau_c << tau_q: flag every committed transaction whose realized
    coordination latency reached the coherence deadline.
    """
    return timing_violations(result.transactions, timing.tau_q_p)
