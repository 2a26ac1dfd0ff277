"""
Aggregate a run into the numbers that matter: how much of the coherence
window is left for computation, how often transactions abort and what the
decoder gets to see of the failures.

All the functions here are pure and work on the plain dicts of a run
record, so they can be re-derived from the serialized streams.
"""
from collections import Counter
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from modular_qc.protocol import Classification, FailureKind, TxnState

# Surface code thresholds under uncharacterized depolarizing noise and under
# location-known erasures
DEPOLARIZING_THRESHOLD = 0.0094
ERASURE_THRESHOLD = 0.031
ERASURE_ANNOTATION = 0.0415


class ThresholdVerdict(Enum):
    """
    Where the residual noise sits with respect to the two thresholds.
    """
    WITHIN_DEPOLARIZING_THRESHOLD = 'WithinDepolarizingThreshold'
    WITHIN_ERASURE_REGIME_ONLY = 'WithinErasureRegimeOnly'
    ABOVE_ALL_THRESHOLDS = 'AboveAllThresholds'


@dataclass(frozen=True)
class ThresholdSettings:
    """
    The erasure regime only applies when a dominant fraction of the errors
    are flagged erasures, 0.5 unless configured.
    """
    depolarizing_threshold: float = DEPOLARIZING_THRESHOLD
    erasure_threshold: float = ERASURE_THRESHOLD
    erasure_annotation: float = ERASURE_ANNOTATION
    dominance_fraction: float = 0.5
    background_depolarizing_rate: float = 0.0

    def __post_init__(self):
        if not 0 < self.depolarizing_threshold <= self.erasure_threshold <= self.erasure_annotation < 1:
            raise ValueError('Thresholds must satisfy 0 < depolarizing <= erasure <= annotation < 1')

        if not 0 <= self.dominance_fraction <= 1:
            raise ValueError('Dominance fraction must be in [0, 1], got {}'.format(self.dominance_fraction))

        if not 0 <= self.background_depolarizing_rate <= 1:
            raise ValueError('Background depolarizing rate must be in [0, 1], got {}'.format(
                self.background_depolarizing_rate))


def compute_window(tau_q: int, tau_c: int, tau_p: int) -> int:
    """
    tau_compute = tau_q - (tau_c + tau_p). Negative windows are returned as
    they are, they mean the regime is infeasible.
    """
    return tau_q - (tau_c + tau_p)


def effective_threshold_check(residual_depolarizing_rate: float, erasure_fraction: float,
                              settings: ThresholdSettings = ThresholdSettings()) -> ThresholdVerdict:
    """
    Compare the residual depolarizing rate against the depolarizing
    threshold first, then against the erasure threshold when erasures
    dominate.
    """
    for name, value in (('residual_depolarizing_rate', residual_depolarizing_rate),
                        ('erasure_fraction', erasure_fraction)):
        if not 0 <= value <= 1:
            raise ValueError('{} must be in [0, 1], got {}'.format(name, value))

    if residual_depolarizing_rate < settings.depolarizing_threshold:
        return ThresholdVerdict.WITHIN_DEPOLARIZING_THRESHOLD

    if residual_depolarizing_rate < settings.erasure_threshold and erasure_fraction >= settings.dominance_fraction:
        return ThresholdVerdict.WITHIN_ERASURE_REGIME_ONLY

    return ThresholdVerdict.ABOVE_ALL_THRESHOLDS


def _mean(values) -> Optional[float]:
    return sum(values) / len(values) if values else None


def outcome_counts(transactions: List[Dict]) -> Dict:
    """
    Count the transactions per terminal state. The rates are None when no
    transaction ever arrived.
    """
    states = Counter(txn['state'] for txn in transactions)
    total = len(transactions)

    committed = states[TxnState.COMMITTED.value]
    aborted_temporal = states[TxnState.ABORTED_TEMPORAL.value]
    aborted_physical = states[TxnState.ABORTED_PHYSICAL.value]

    return {
        'n_transactions': total,
        'n_committed': committed,
        'n_aborted_temporal': aborted_temporal,
        'n_aborted_physical': aborted_physical,
        'n_retries': sum(1 for txn in transactions if txn['parent_txn_id'] is not None),
        'abort_rate': (aborted_temporal + aborted_physical) / total if total else None,
        'commit_rate': committed / total if total else None,
        'abort_reasons': dict(sorted(Counter(txn['abort_reason'] for txn in transactions
                                             if txn['abort_reason']).items())),
    }


def window_stats(transactions: List[Dict], tau_q: int) -> Dict:
    """
    Realized latencies and compute windows, averaged over the committed
    transactions.
    """
    committed = [txn for txn in transactions if txn['state'] == TxnState.COMMITTED.value]
    windows = [compute_window(tau_q, txn['tau_c_ns'], txn['tau_p_ns']) for txn in committed]
    fidelities = [fidelity for txn in committed for fidelity in txn['fidelities']]

    return {
        'mean_tau_c_realized_ns': _mean([txn['tau_c_ns'] for txn in committed]),
        'mean_tau_p_ns': _mean([txn['tau_p_ns'] for txn in committed]),
        'mean_compute_window_ns': _mean(windows),
        'min_compute_window_ns': min(windows) if windows else None,
        'negative_windows': sum(1 for window in windows if window < 0),
        'mean_fidelity': _mean(fidelities),
    }


def record_composition(records: List[Dict]) -> Dict:
    """
    Count the failure records per kind and per classification. The erasure
    fraction is taken over the error records only, the Pauli frame updates
    of the degraded qubits are known outcomes and not errors.
    """
    kinds = Counter(record['kind'] for record in records)
    classes = Counter(record['classification'] for record in records)

    erasure = classes[Classification.ERASURE_MARKER.value]
    depolarizing = classes[Classification.DEPOLARIZING_NOISE.value]
    errors = erasure + depolarizing

    return {
        'record_counts': {kind.value: kinds[kind.value] for kind in FailureKind},
        'n_erasure': erasure,
        'n_depolarizing': depolarizing,
        'n_pauli_frame': classes[Classification.PAULI_FRAME_UPDATE.value],
        'erasure_fraction': erasure / errors if errors else None,
        'depolarizing_fraction': depolarizing / errors if errors else None,
    }


def residual_depolarizing_rate(transactions: List[Dict], records: List[Dict],
                               background_rate: float = 0.0) -> float:
    """
    The configured background physical error rate plus the unheralded
    records per participant qubit-operation.
    """
    operations = sum(len(txn['participants']) for txn in transactions)
    unheralded = sum(1 for record in records
                     if record['classification'] == Classification.DEPOLARIZING_NOISE.value)

    rate = background_rate + (unheralded / operations if operations else 0.0)
    return min(1.0, rate)


@dataclass
class MetricsReport:
    """
    Everything reported about one run, in a stable field order.
    """
    n_transactions: int
    n_committed: int
    n_aborted_temporal: int
    n_aborted_physical: int
    n_retries: int
    n_generated: int
    n_consumed: int
    n_expired: int
    n_available: int
    n_released: int
    abort_rate: Optional[float]
    commit_rate: Optional[float]
    mean_tau_c_realized_ns: Optional[float]
    mean_tau_p_ns: Optional[float]
    mean_compute_window_ns: Optional[float]
    min_compute_window_ns: Optional[int]
    negative_windows: int
    mean_fidelity: Optional[float]
    n_erasure: int
    n_depolarizing: int
    n_pauli_frame: int
    erasure_fraction: Optional[float]
    depolarizing_fraction: Optional[float]
    residual_depolarizing_rate: float
    threshold_verdict: str
    timing_violations: int
    erasure_threshold_band: Tuple[float, float] = (ERASURE_THRESHOLD, ERASURE_ANNOTATION)
    record_counts: Dict[str, int] = field(default_factory=dict)
    abort_reasons: Dict[str, int] = field(default_factory=dict)

    def as_dict(self):
        """
        Plain dict, fields in declaration order.
        """
        report = asdict(self)
        report['erasure_threshold_band'] = list(self.erasure_threshold_band)
        return report


def build_report(outcomes: Dict, windows: Dict, composition: Dict, ledger_counts: Dict,
                 residual_rate: float, verdict: ThresholdVerdict, timing_violations: int,
                 settings: ThresholdSettings = ThresholdSettings()) -> MetricsReport:
    """
    Put the pieces together. The tuple counts must reconcile with the
    conservation law, anything else is a bug upstream.
    """
    if ledger_counts['generated'] != (ledger_counts['consumed'] + ledger_counts['expired']
                                      + ledger_counts['available'] + ledger_counts['reserved']):
        raise ValueError('Tuple counts do not reconcile: {}'.format(ledger_counts))

    return MetricsReport(n_transactions=outcomes['n_transactions'],
                         n_committed=outcomes['n_committed'],
                         n_aborted_temporal=outcomes['n_aborted_temporal'],
                         n_aborted_physical=outcomes['n_aborted_physical'],
                         n_retries=outcomes['n_retries'],
                         n_generated=ledger_counts['generated'],
                         n_consumed=ledger_counts['consumed'],
                         n_expired=ledger_counts['expired'],
                         n_available=ledger_counts['available'],
                         n_released=ledger_counts['released'],
                         abort_rate=outcomes['abort_rate'],
                         commit_rate=outcomes['commit_rate'],
                         mean_tau_c_realized_ns=windows['mean_tau_c_realized_ns'],
                         mean_tau_p_ns=windows['mean_tau_p_ns'],
                         mean_compute_window_ns=windows['mean_compute_window_ns'],
                         min_compute_window_ns=windows['min_compute_window_ns'],
                         negative_windows=windows['negative_windows'],
                         mean_fidelity=windows['mean_fidelity'],
                         n_erasure=composition['n_erasure'],
                         n_depolarizing=composition['n_depolarizing'],
                         n_pauli_frame=composition['n_pauli_frame'],
                         erasure_fraction=composition['erasure_fraction'],
                         depolarizing_fraction=composition['depolarizing_fraction'],
                         residual_depolarizing_rate=residual_rate,
                         threshold_verdict=verdict.value,
                         timing_violations=timing_violations,
                         erasure_threshold_band=(settings.erasure_threshold, settings.erasure_annotation),
                         record_counts=composition['record_counts'],
                         abort_reasons=outcomes['abort_reasons'])


def timing_violations(transactions: List[Dict], tau_q_p: int) -> List[Dict]:
    """
    Every committed transaction whose realized coordination latency reached
    the tuple deadline tau_q^(p).
    """
    violations = []

    for txn in transactions:
        if txn['state'] != TxnState.COMMITTED.value or txn['coordination_ns'] < tau_q_p:
            continue

        violations.append({
            'txn_id': txn['txn_id'],
            'coordination_ns': txn['coordination_ns'],
            'tau_q_p_ns': tau_q_p,
            'excess_ns': txn['coordination_ns'] - tau_q_p,
        })

    return violations
