# pylint: disable=missing-docstring
from .transaction import Stage, COMMIT_STAGES, TxnState, Transaction, required_links_for
from .degradation import FailureKind, Classification, QubitPolicy, FailureRecord
from .degradation import classify_failure, failure_records, degrade
from .engine import ProtocolSettings, FaultModel, LatencyEstimate, ReserveResult
from .engine import stage_latencies, estimate_exec_latency, reserve_phase, round_half_up
from .engine import ReserveCommitProtocol
