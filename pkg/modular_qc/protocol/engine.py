"""
The time-aware Reserve-Commit protocol.

Phase 1 (Reserve) locks one tuple per required link, atomically across all
participants, after checking that the projected execution fits in the
remaining lifetime of every tuple:

    abort if t_current + tau_exec* >= t_gen + tau_q^(p)

Phase 2 (Commit) runs the remaining four stages as scheduled events and
consumes the tuples. Transactions are never queued: a failed Reserve is an
immediate abort, which the workload may retry as a brand new transaction.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from modular_qc.analytics.timing_bounds import TimingParams
from modular_qc.errors import InvariantViolation, ProtocolViolationError
from modular_qc.events import EventKind
from modular_qc.ledger import EntanglementLedger, ReserveOutcome, TupleState
from modular_qc.protocol.degradation import FailureKind, FailureRecord, QubitPolicy
from modular_qc.protocol.degradation import degrade, failure_records
from modular_qc.protocol.transaction import COMMIT_STAGES, Stage, Transaction, TxnState
from modular_qc.topology import Topology, max_pairwise


def round_half_up(value) -> int:
    """
    The one rounding rule at the float/integer-ns boundary.
    """
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class ProtocolSettings:
    """
    Stage latency model and protocol knobs. Defaults: local entangling gate
    100 ns, measurement 500 ns, jitter bounded to +-30% and covered by a
    1.5 percentile multiplier.
    """
    local_entangle_ns: int = 100
    measurement_ns: int = 500
    query_ns: int = 0
    handshake_ns: int = 0
    jitter_fraction: float = 0.3
    multiplier: float = 1.5
    # Turning the pre-check off is only meant for forced-violation tests
    precheck: bool = True
    retry_count: int = 0
    retry_spacing_ns: int = 1000
    qubit_policy: QubitPolicy = QubitPolicy.RESET
    stalled_window_as_erasure: bool = False
    per_hop_decode: bool = False

    def __post_init__(self):
        for name in ('local_entangle_ns', 'measurement_ns', 'query_ns', 'handshake_ns', 'retry_spacing_ns'):
            if getattr(self, name) < 0:
                raise ValueError('{} must be >= 0, got {}'.format(name, getattr(self, name)))

        if not 0 <= self.jitter_fraction < 1:
            raise ValueError('Jitter fraction must be in [0, 1), got {}'.format(self.jitter_fraction))

        if self.multiplier < 1:
            raise ValueError('Percentile multiplier must be >= 1, got {}'.format(self.multiplier))

        if self.retry_count < 0:
            raise ValueError('Retry count must be >= 0, got {}'.format(self.retry_count))


@dataclass(frozen=True)
class FaultModel:
    """
    Independent heralded-failure probability per commit stage, e.g. a
    detector dark count in Measurement or a herald loss in Coordination.
    """
    probabilities: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        for stage, probability in self.probabilities.items():
            if Stage(stage) not in COMMIT_STAGES:
                raise ValueError('Faults can only be attached to commit stages, got {}'.format(stage))

            if not 0 <= probability <= 1:
                raise ValueError('Fault probability must be in [0, 1], got {}'.format(probability))

    @classmethod
    def uniform(cls, probability):
        """
        The same probability on each of the four commit stages.
        """
        return cls({int(stage): probability for stage in COMMIT_STAGES})

    def probability(self, stage) -> float:
        """
        Zero unless configured.
        """
        return self.probabilities.get(int(stage), 0.0)


@dataclass(frozen=True)
class LatencyEstimate:
    """
    The bounded worst-case projected latency tau_exec* and the nominal stage
    latencies it was built from.
    """
    tau_exec_star_ns: int
    percentile_multiplier: float
    nominal_ns: Dict[int, int]
    handshake_ns: int = 0

    @property
    def deterministic_ns(self):
        """
        The path latency without any multiplier.
        """
        return sum(self.nominal_ns.values()) + self.handshake_ns * len(COMMIT_STAGES)


def stage_latencies(txn: Transaction, topology: Topology, timing: TimingParams,
                    settings: ProtocolSettings) -> Dict[int, int]:
    """
    Nominal latency of each of the five stages, in integer ns.
    """
    local = max(topology.local_gate_ns(module, settings.local_entangle_ns) for module in txn.participants)
    latency, hops = max_pairwise(topology, txn.participants)
    decode = timing.tau_decode * max(1, hops) if settings.per_hop_decode else timing.tau_decode

    return {
        Stage.QUERY: settings.query_ns,
        Stage.LOCAL_ENTANGLE: local,
        Stage.MEASUREMENT: settings.measurement_ns,
        Stage.COORDINATION: round_half_up(latency) + decode,
        Stage.FEEDFORWARD: timing.tau_ff,
    }


def estimate_exec_latency(txn: Transaction, topology: Topology, timing: TimingParams,
                          settings: ProtocolSettings, multiplier=None) -> LatencyEstimate:
    """
    tau_exec* = multiplier * (sum of the nominal stage latencies), rounded
    up so that it stays a bound.
    """
    multiplier = settings.multiplier if multiplier is None else multiplier

    if multiplier < 1:
        raise ValueError('Percentile multiplier must be >= 1, got {}'.format(multiplier))

    nominal = stage_latencies(txn, topology, timing, settings)
    total = sum(nominal.values()) + settings.handshake_ns * len(COMMIT_STAGES)

    return LatencyEstimate(tau_exec_star_ns=int(math.ceil(multiplier * total)),
                           percentile_multiplier=multiplier,
                           nominal_ns=nominal,
                           handshake_ns=settings.handshake_ns)


@dataclass
class ReserveResult:
    """
    Outcome of phase 1. An abort is a modeled result, not an exception.
    """
    state: TxnState
    reason: Optional[str] = None
    records: List[FailureRecord] = field(default_factory=list)

    @property
    def reserved(self):
        """
        All tuples are locked.
        """
        return self.state == TxnState.RESERVED


def reserve_phase(txn: Transaction, ledger: EntanglementLedger, now_ns, estimate: LatencyEstimate,
                  precheck=True) -> ReserveResult:
    """
    Query, pre-check and lock a tuple for every required link. The first
    failure rolls back everything reserved so far.
    """
    if txn.state != TxnState.PENDING:
        raise ProtocolViolationError('Transaction {} is {}, only pending ones can reserve'.format(
            txn.txn_id, txn.state.value))

    reason = None

    for link in txn.required_links:
        tuple_id = ledger.query(link, now_ns)

        if tuple_id is None:
            reason = 'no_tuple'
            break

        deadline = ledger.tuples[tuple_id].deadline_ns
        # A tuple is dead at its deadline, so landing exactly on it fails too
        if precheck and now_ns + estimate.tau_exec_star_ns >= deadline:
            reason = 'deadline'
            break

        outcome = ledger.reserve(tuple_id, txn.txn_id, now_ns)
        if outcome != ReserveOutcome.OK:
            reason = outcome.value
            break

        txn.reserved_tuples.append(tuple_id)

    if reason is None:
        txn.transition(TxnState.RESERVED)
        txn.estimate_ns = estimate.tau_exec_star_ns
        return ReserveResult(state=TxnState.RESERVED)

    for tuple_id in txn.reserved_tuples:
        ledger.release(tuple_id, txn.txn_id)

    txn.reserved_tuples = []
    txn.abort_reason = reason
    txn.estimate_ns = estimate.tau_exec_star_ns
    txn.transition(TxnState.ABORTED_TEMPORAL)

    return ReserveResult(state=TxnState.ABORTED_TEMPORAL,
                         reason=reason,
                         records=failure_records(txn, FailureKind.HERALDED_TIMEOUT_ABORT, now_ns))


class ReserveCommitProtocol:
    """
    Drive transactions through Reserve and Commit on top of the simulation
    event loop. All state changes happen inside event handlers, in event
    order.
    """
    def __init__(self, ledger: EntanglementLedger, topology: Topology, timing: TimingParams,
                 settings: ProtocolSettings, faults: FaultModel, fault_rng, jitter_rng,
                 schedule: Callable, audit=False):
        """
        The schedule callable is the kernel's insert(time_ns, kind, payload),
        it is how stage completions get onto the event list.
        """
        self.ledger = ledger
        self.topology = topology
        self.timing = timing
        self.settings = settings
        self.faults = faults
        self.fault_rng = fault_rng
        self.jitter_rng = jitter_rng
        self.schedule = schedule
        self.audit = audit

        self.active: Dict[int, Transaction] = {}
        self.finished: List[Transaction] = []
        self.records: List[FailureRecord] = []
        self._estimates: Dict[int, LatencyEstimate] = {}
        self._next_txn_id = 1

    def new_transaction(self, participants, required_links, now_ns, parent_txn_id=None, attempt=0):
        """
        Create a pending transaction with a fresh id.
        """
        txn = Transaction(txn_id=self._next_txn_id,
                          participants=list(participants),
                          required_links=list(required_links),
                          created_ns=now_ns,
                          parent_txn_id=parent_txn_id,
                          attempt=attempt)
        self._next_txn_id += 1

        return txn

    def sweep(self, now_ns):
        """
        Expire every tuple past its deadline and tell the holders.
        """
        for tuple_id in self.ledger.expire_sweep(now_ns):
            holder = self.ledger.tuples[tuple_id].holder

            if holder is not None and holder in self.active:
                self.on_tuple_expired(holder, now_ns)

    def submit(self, txn: Transaction, now_ns):
        """
        Phase 1. On success the commit starts right away.
        """
        self.sweep(now_ns)

        estimate = estimate_exec_latency(txn, self.topology, self.timing, self.settings)
        before = self.ledger.live_snapshot() if self.audit else None

        result = reserve_phase(txn, self.ledger, now_ns, estimate, precheck=self.settings.precheck)

        if not result.reserved:
            if self.audit and self.ledger.live_snapshot() != before:
                raise InvariantViolation('Transaction {} left the ledger modified after a rollback'.format(
                    txn.txn_id))

            logging.debug('Transaction %d aborted at %d ns: %s', txn.txn_id, now_ns, result.reason)
            self.records.extend(result.records)
            self._abort(txn, now_ns)
            return

        txn.fidelities = [self.ledger.tuples[tuple_id].fidelity for tuple_id in txn.reserved_tuples]
        self._estimates[txn.txn_id] = estimate
        self.active[txn.txn_id] = txn
        self.commit_phase(txn, now_ns)

    def commit_phase(self, txn: Transaction, now_ns):
        """
        Phase 2. The query handshake completes first, then the four commit
        stages run one after the other as scheduled events.
        """
        if txn.state != TxnState.RESERVED:
            raise ProtocolViolationError('Transaction {} is {}, only reserved ones can commit'.format(
                txn.txn_id, txn.state.value))

        query_ns = self.settings.query_ns
        txn.stage = Stage.QUERY
        txn.stage_durations[Stage.QUERY] = query_ns
        txn.protocol_ns += query_ns

        self.schedule(now_ns + query_ns, EventKind.STAGE_COMPLETE, (txn.txn_id, int(Stage.QUERY)))

    def _realized(self, txn, stage):
        """
        Nominal latency with bounded uniform jitter. One draw per stage
        whatever the jitter setting, so the stream stays aligned.
        """
        nominal = self._estimates[txn.txn_id].nominal_ns[stage]
        jitter = self.jitter_rng.uniform(-self.settings.jitter_fraction, self.settings.jitter_fraction)
        return max(0, round_half_up(nominal * (1 + jitter)))

    def _start_stage(self, txn, stage, now_ns):
        duration = self._realized(txn, stage)
        handshake = self.settings.handshake_ns

        txn.stage = stage
        txn.stage_durations[stage] = duration
        txn.protocol_ns += handshake

        self.schedule(now_ns + handshake + duration, EventKind.STAGE_COMPLETE, (txn.txn_id, int(stage)))

    def on_stage_complete(self, txn_id, stage, now_ns):
        """
        Advance a transaction by one stage, unless it has been aborted in
        the meantime.
        """
        self.sweep(now_ns)

        txn = self.active.get(txn_id)
        if txn is None or txn.terminal:
            return

        stage = Stage(stage)
        txn.last_stage_ns = now_ns

        if stage == Stage.QUERY:
            txn.transition(TxnState.COMMITTING)
            self._start_stage(txn, Stage.LOCAL_ENTANGLE, now_ns)
            return

        if self.fault_rng.random() < self.faults.probability(stage):
            logging.debug('Transaction %d lost a herald in stage %s at %d ns', txn_id, stage.name, now_ns)
            self._consume_all(txn, now_ns)
            txn.abort_reason = 'herald_loss_{}'.format(stage.name.lower())
            self.records.extend(failure_records(txn, FailureKind.HERALDED_PHYSICAL_LOSS, now_ns))
            txn.transition(TxnState.ABORTED_PHYSICAL)
            self._abort(txn, now_ns)
            return

        if stage == Stage.FEEDFORWARD:
            self._consume_all(txn, now_ns)
            txn.transition(TxnState.COMMITTED)
            self._finish(txn, now_ns)
            return

        self._start_stage(txn, Stage(stage + 1), now_ns)

    def on_tuple_expired(self, txn_id, now_ns):
        """
        A reserved tuple died under a running transaction. Before the commit
        starts this is a timeout, after that the qubits have been idling and
        the stalled window is unheralded decoherence.
        """
        txn = self.active[txn_id]

        if txn.state == TxnState.RESERVED:
            self._release_live(txn)
            txn.reserved_tuples = []
            txn.abort_reason = 'expired_before_commit'
            self.records.extend(failure_records(txn, FailureKind.HERALDED_TIMEOUT_ABORT, now_ns))
            txn.transition(TxnState.ABORTED_TEMPORAL)

        else:
            self._consume_all(txn, now_ns)
            txn.abort_reason = 'expired_mid_commit'
            txn.transition(TxnState.ABORTED_PHYSICAL)

        logging.debug('Transaction %d lost a tuple to expiry at %d ns', txn_id, now_ns)
        self._abort(txn, now_ns)

    def _consume_all(self, txn, now_ns):
        """
        The tuples are physically spent, whatever the outcome. Only the ones
        still reserved can be consumed, the others already expired.
        """
        for tuple_id in txn.reserved_tuples:
            if self.ledger.tuples[tuple_id].state == TupleState.RESERVED:
                self.ledger.consume(tuple_id, txn.txn_id, now_ns)

    def _release_live(self, txn):
        for tuple_id in txn.reserved_tuples:
            if self.ledger.tuples[tuple_id].state == TupleState.RESERVED:
                self.ledger.release(tuple_id, txn.txn_id)

    def _abort(self, txn, now_ns):
        self.records.extend(degrade(txn, now_ns,
                                    qubit_policy=self.settings.qubit_policy,
                                    stalled_window_as_erasure=self.settings.stalled_window_as_erasure))
        self._finish(txn, now_ns)

        if txn.state == TxnState.ABORTED_TEMPORAL and txn.attempt < self.settings.retry_count:
            self.schedule(now_ns + self.settings.retry_spacing_ns, EventKind.TRANSACTION_ARRIVAL,
                          {'participants': tuple(txn.participants),
                           'parent_txn_id': txn.txn_id,
                           'attempt': txn.attempt + 1})

    def _finish(self, txn, now_ns):
        txn.finished_ns = now_ns
        self.finished.append(txn)
        self.active.pop(txn.txn_id, None)
        self._estimates.pop(txn.txn_id, None)
