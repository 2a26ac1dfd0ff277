"""
A nonlocal LOCC operation executed as a composite transaction of five
sequential stages: Query, Local Entanglement, Measurement, Coordination and
Feedforward.
"""
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Dict, List, Optional, Tuple

from modular_qc.errors import ProtocolViolationError
from modular_qc.ledger import link_key


class Stage(IntEnum):
    """
    The five stages, in execution order. Query happens during Reserve.
    """
    QUERY = 1
    LOCAL_ENTANGLE = 2
    MEASUREMENT = 3
    COORDINATION = 4
    FEEDFORWARD = 5


COMMIT_STAGES = (Stage.LOCAL_ENTANGLE, Stage.MEASUREMENT, Stage.COORDINATION, Stage.FEEDFORWARD)


class TxnState(Enum):
    """
    Where a transaction is in the Reserve-Commit protocol.
    """
    PENDING = 'Pending'
    RESERVED = 'Reserved'
    COMMITTING = 'Committing'
    COMMITTED = 'Committed'
    ABORTED_TEMPORAL = 'AbortedTemporal'
    ABORTED_PHYSICAL = 'AbortedPhysical'


LEGAL_TRANSITIONS = {
    TxnState.PENDING: {TxnState.RESERVED, TxnState.ABORTED_TEMPORAL},
    # An expiry notice can still land between Reserve and the commit start
    TxnState.RESERVED: {TxnState.COMMITTING, TxnState.ABORTED_TEMPORAL},
    TxnState.COMMITTING: {TxnState.COMMITTED, TxnState.ABORTED_PHYSICAL},
    TxnState.COMMITTED: set(),
    TxnState.ABORTED_TEMPORAL: set(),
    TxnState.ABORTED_PHYSICAL: set(),
}

TERMINAL_STATES = {TxnState.COMMITTED, TxnState.ABORTED_TEMPORAL, TxnState.ABORTED_PHYSICAL}

ABORTED_STATES = {TxnState.ABORTED_TEMPORAL, TxnState.ABORTED_PHYSICAL}


def required_links_for(participants, links_per_pair=1) -> List[Tuple[str, str]]:
    """
    One tuple per consecutive pair of participants. Transactions with more
    than two participants are chained this way.
    """
    links = []
    for module_i, module_j in zip(participants, participants[1:]):
        links.extend([link_key(module_i, module_j)] * links_per_pair)

    return links


@dataclass
class Transaction:
    """
    A composite transaction and everything measured while it ran.
    """
    txn_id: int
    participants: List[str]
    required_links: List[Tuple[str, str]]
    created_ns: int
    reserved_tuples: List[int] = field(default_factory=list)
    state: TxnState = TxnState.PENDING
    # Index of the stage being executed while Committing
    stage: int = 0
    finished_ns: Optional[int] = None
    last_stage_ns: Optional[int] = None
    parent_txn_id: Optional[int] = None
    attempt: int = 0
    abort_reason: Optional[str] = None
    estimate_ns: Optional[int] = None
    stage_durations: Dict[int, int] = field(default_factory=dict)
    # Query and interface handshakes accumulated so far
    protocol_ns: int = 0
    fidelities: List[float] = field(default_factory=list)

    def __post_init__(self):
        if len(self.participants) < 2:
            raise ValueError('Transaction {} needs at least two participants'.format(self.txn_id))

        if self.last_stage_ns is None:
            self.last_stage_ns = self.created_ns

    @property
    def terminal(self):
        """
        Committed or aborted, either way it is over.
        """
        return self.state in TERMINAL_STATES

    def transition(self, new_state: TxnState):
        """
        Move to a new state, refusing anything the protocol does not allow.
        """
        if new_state not in LEGAL_TRANSITIONS[self.state]:
            raise ProtocolViolationError('Transaction {}: illegal transition {} -> {}'.format(
                self.txn_id, self.state.value, new_state.value))

        self.state = new_state

    @property
    def tau_c_ns(self):
        """
        Realized coordination latency: classical signal flight plus decode.
        """
        return self.stage_durations.get(Stage.COORDINATION)

    @property
    def tau_p_ns(self):
        """
        Realized protocol latency: the Query handshake plus the interface
        handshakes between stages.
        """
        return self.protocol_ns

    def as_dict(self):
        """
        Plain dict in a stable field order, for serialization.
        """
        return {
            'txn_id': self.txn_id,
            'parent_txn_id': self.parent_txn_id,
            'attempt': self.attempt,
            'participants': list(self.participants),
            'required_links': [list(link) for link in self.required_links],
            'reserved_tuples': list(self.reserved_tuples),
            'state': self.state.value,
            'abort_reason': self.abort_reason,
            'stage': self.stage,
            'created_ns': self.created_ns,
            'finished_ns': self.finished_ns,
            'estimate_ns': self.estimate_ns,
            'query_ns': self.stage_durations.get(Stage.QUERY),
            'local_entangle_ns': self.stage_durations.get(Stage.LOCAL_ENTANGLE),
            'measurement_ns': self.stage_durations.get(Stage.MEASUREMENT),
            'coordination_ns': self.stage_durations.get(Stage.COORDINATION),
            'feedforward_ns': self.stage_durations.get(Stage.FEEDFORWARD),
            'tau_c_ns': self.tau_c_ns,
            'tau_p_ns': self.tau_p_ns,
            'fidelities': list(self.fidelities),
        }
