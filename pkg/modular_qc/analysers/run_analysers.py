"""
The analysers of the metrics pipeline. Each one looks at one aspect of the
run; the last ones combine the outputs of the others, so the order in which
they are given to the simulator matters.
"""
import logging

from .base import Analyser, find_output
from .metrics import ThresholdSettings, build_report, effective_threshold_check
from .metrics import outcome_counts, record_composition, residual_depolarizing_rate
from .metrics import timing_violations, window_stats


# pylint: disable=too-few-public-methods
class OutcomeAnalyser(Analyser):
    """
    Committed versus aborted transactions.
    """
    def run(self, record):
        """
        Count the terminal states.
        """
        return self.append(record, outcome_counts(record['transactions']))


class ComputeWindowAnalyser(Analyser):
    """
    How much of the coherence window is left once coordination and the
    protocol handshakes are paid for.
    """
    def run(self, record):
        """
        The window is measured against tau_q, not against the stricter
        tuple deadline.
        """
        output = window_stats(record['transactions'], record['tau_q_ns'])

        if output['negative_windows']:
            logging.warning('%d committed transactions had a negative compute window', output['negative_windows'])

        return self.append(record, output)


class ErasureCompositionAnalyser(Analyser):
    """
    Split the failure records between erasures and depolarizing noise.
    """
    def run(self, record):
        """
        Also counts the records per kind.
        """
        return self.append(record, record_composition(record['records']))


class TimingContractAnalyser(Analyser):
    """
    List the committed transactions that broke tau_c << tau_q.
    """
    def run(self, record):
        """
        The output is the list of violations, empty is good.
        """
        violations = timing_violations(record['transactions'], record['tau_q_p_ns'])

        if violations:
            logging.warning('%d committed transactions broke the timing contract', len(violations))

        return self.append(record, violations)


class ConservationAnalyser(Analyser):
    """
    Re-check the tuple conservation law on the final counts.
    """
    def run(self, record):
        """
        generated = consumed + expired + available, nothing left reserved.
        """
        counts = record['ledger_counts']
        closed = counts['consumed'] + counts['expired'] + counts['available']

        return self.append(record, {
            'conserved': counts['generated'] == closed and counts['reserved'] == 0,
            'reserved_at_end': counts['reserved'],
        })


class ThresholdAnalyser(Analyser):
    """
    This is the meta analyser which combines the erasure composition and the
    unheralded records into a threshold verdict.
    """
    def __init__(self, settings=None):
        """
        The background physical error rate comes from the settings.
        """
        self.settings = settings or ThresholdSettings()

    def run(self, record):
        """
        Use the erasure composition computed earlier if it is there.
        """
        composition = find_output(record, 'ErasureCompositionAnalyser') or record_composition(record['records'])

        rate = residual_depolarizing_rate(record['transactions'], record['records'],
                                          self.settings.background_depolarizing_rate)
        erasure_fraction = composition['erasure_fraction'] or 0.0

        return self.append(record, {
            'residual_depolarizing_rate': rate,
            'erasure_fraction': erasure_fraction,
            'dominance_fraction': self.settings.dominance_fraction,
            'threshold_verdict': effective_threshold_check(rate, erasure_fraction, self.settings).value,
        })


class MetricsReportAnalyser(Analyser):
    """
    Assemble the final metrics report from the outputs of the analysers
    above, computing whatever is missing.
    """
    def __init__(self, settings=None):
        self.settings = settings or ThresholdSettings()
        self.report = None

    def run(self, record):
        """
        The report is also kept on the analyser for the caller.
        """
        outcomes = find_output(record, 'OutcomeAnalyser') or outcome_counts(record['transactions'])
        windows = find_output(record, 'ComputeWindowAnalyser') or window_stats(record['transactions'],
                                                                              record['tau_q_ns'])
        composition = find_output(record, 'ErasureCompositionAnalyser') or record_composition(record['records'])

        violations = find_output(record, 'TimingContractAnalyser')
        if violations is None:
            violations = timing_violations(record['transactions'], record['tau_q_p_ns'])

        threshold = find_output(record, 'ThresholdAnalyser')
        if threshold is None:
            threshold = ThresholdAnalyser(self.settings).run({'transactions': record['transactions'],
                                                              'records': record['records'],
                                                              'analysers': []})['analysers'][0]['output']

        self.report = build_report(outcomes=outcomes,
                                   windows=windows,
                                   composition=composition,
                                   ledger_counts=record['ledger_counts'],
                                   residual_rate=threshold['residual_depolarizing_rate'],
                                   verdict=effective_threshold_check(threshold['residual_depolarizing_rate'],
                                                                     threshold['erasure_fraction'],
                                                                     self.settings),
                                   timing_violations=len(violations),
                                   settings=self.settings)

        return self.append(record, self.report.as_dict())


def default_analysers(settings=None):
    """
    The standard metrics pipeline. Note that their order is important cause
    they will be executed in that order.
    """
    settings = settings or ThresholdSettings()

    return [
        OutcomeAnalyser(),
        ComputeWindowAnalyser(),
        ErasureCompositionAnalyser(),
        TimingContractAnalyser(),
        ConservationAnalyser(),
        ThresholdAnalyser(settings),
        MetricsReportAnalyser(settings),
    ]
