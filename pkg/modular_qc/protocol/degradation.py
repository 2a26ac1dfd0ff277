"""
Semantic degradation. A failed LOCC transaction cannot be rolled back
physically, so instead of recovering the state we describe what happened to
the decoder: heralded failures become location-known erasure markers,
unheralded decoherence stays depolarizing noise and the measured or reset
data qubits become known Pauli frame updates.
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from modular_qc.errors import ProtocolViolationError
from modular_qc.protocol.transaction import ABORTED_STATES, Transaction


class FailureKind(Enum):
    """
    What went wrong, or what was done to a qubit.
    """
    HERALDED_TIMEOUT_ABORT = 'HeraldedTimeoutAbort'
    HERALDED_PHYSICAL_LOSS = 'HeraldedPhysicalLoss'
    UNHERALDED_DECOHERENCE = 'UnheraldedDecoherence'
    # A data qubit measured or reset during degradation
    DEGRADED_QUBIT = 'DegradedQubit'


class Classification(Enum):
    """
    How the decoder gets to see a failure.
    """
    ERASURE_MARKER = 'ErasureMarker'
    DEPOLARIZING_NOISE = 'DepolarizingNoise'
    PAULI_FRAME_UPDATE = 'PauliFrameUpdate'


class QubitPolicy(Enum):
    """
    What to do with the data qubits of an aborted transaction.
    """
    MEASURE = 'measure'
    RESET = 'reset'


CLASSIFIER = {
    FailureKind.HERALDED_TIMEOUT_ABORT: Classification.ERASURE_MARKER,
    FailureKind.HERALDED_PHYSICAL_LOSS: Classification.ERASURE_MARKER,
    FailureKind.UNHERALDED_DECOHERENCE: Classification.DEPOLARIZING_NOISE,
    FailureKind.DEGRADED_QUBIT: Classification.PAULI_FRAME_UPDATE,
}

ERROR_CLASSIFICATIONS = (Classification.ERASURE_MARKER, Classification.DEPOLARIZING_NOISE)


@dataclass(frozen=True)
class FailureRecord:
    """
    One classified failure event, located at a module.
    """
    txn_id: int
    module_location: str
    kind: FailureKind
    classification: Classification
    time_ns: int
    # measured / known_initialization for degraded qubits, the stall length
    # for the stalled window
    detail: Optional[str] = None

    def as_dict(self):
        """
        Plain dict in a stable field order, for serialization.
        """
        return {
            'txn_id': self.txn_id,
            'module_location': self.module_location,
            'kind': self.kind.value,
            'classification': self.classification.value,
            'time_ns': self.time_ns,
            'detail': self.detail,
        }


def classify_failure(kind: FailureKind, stalled_window_as_erasure=False) -> Classification:
    """
    Heralded failures become erasure markers, unheralded noise bypasses the
    classifier. The switch reads the stalled waiting window as a
    location-known erasure instead.
    """
    if kind == FailureKind.UNHERALDED_DECOHERENCE and stalled_window_as_erasure:
        return Classification.ERASURE_MARKER

    return CLASSIFIER[kind]


def failure_records(txn: Transaction, kind: FailureKind, now_ns, detail=None,
                    stalled_window_as_erasure=False) -> List[FailureRecord]:
    """
    One record of the same kind per participant location.
    """
    classification = classify_failure(kind, stalled_window_as_erasure)

    return [FailureRecord(txn_id=txn.txn_id,
                          module_location=module,
                          kind=kind,
                          classification=classification,
                          time_ns=now_ns,
                          detail=detail) for module in txn.participants]


def degrade(txn: Transaction, now_ns, qubit_policy=QubitPolicy.RESET,
            stalled_window_as_erasure=False) -> List[FailureRecord]:
    """
    Measure or reset the data qubits of an aborting transaction and report
    the outcome as known Pauli frame updates. If the qubits sat idle since
    the last completed stage, the stalled window is reported as well.
    """
    if txn.state not in ABORTED_STATES:
        raise ProtocolViolationError('Transaction {} is {}, only aborting transactions degrade'.format(
            txn.txn_id, txn.state.value))

    detail = 'measured' if qubit_policy == QubitPolicy.MEASURE else 'known_initialization'
    records = failure_records(txn, FailureKind.DEGRADED_QUBIT, now_ns, detail=detail)

    stall_ns = now_ns - txn.last_stage_ns
    if stall_ns > 0:
        records.extend(failure_records(txn, FailureKind.UNHERALDED_DECOHERENCE, now_ns,
                                       detail='stalled_ns={}'.format(stall_ns),
                                       stalled_window_as_erasure=stalled_window_as_erasure))

    return records
