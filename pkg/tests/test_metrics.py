'''
Metrics derived from a run: compute windows, threshold verdicts, the
erasure composition of the failure records and the starvation curve.
'''
import math
import unittest

from modular_qc.analysers import ComputeWindowAnalyser, ConservationAnalyser, Debugger, ErasureCompositionAnalyser
from modular_qc.analysers import MetricsReportAnalyser, OutcomeAnalyser, ThresholdAnalyser, ThresholdSettings
from modular_qc.analysers import ThresholdVerdict, TimingContractAnalyser, build_report, compute_window
from modular_qc.analysers import default_analysers, effective_threshold_check, find_output, outcome_counts
from modular_qc.analysers import record_composition, residual_depolarizing_rate, window_stats
from modular_qc.analysers.starvation import starvation_curve, with_eta
from modular_qc.analytics import TimingParams
from modular_qc.ledger import LinkConfig
from modular_qc.simulation import KernelSettings, SimConfig, run_scenario
from modular_qc.topology import Topology
from modular_qc.workload import WorkloadConfig


def _txn(txn_id, state, tau_c=None, tau_p=0, fidelities=(), parent=None, reason=None):
    return {
        'txn_id': txn_id,
        'parent_txn_id': parent,
        'participants': ['A', 'B'],
        'state': state,
        'abort_reason': reason,
        'tau_c_ns': tau_c,
        'tau_p_ns': tau_p,
        'coordination_ns': tau_c,
        'fidelities': list(fidelities),
    }


def _records(txn_id, kind, classification, count=2):
    return [{'txn_id': txn_id, 'kind': kind, 'classification': classification} for _ in range(count)]


def _run_record():
    '''
    Two commits, a temporal abort and a physical abort that is a retry.
    '''
    transactions = [
        _txn(1, 'Committed', tau_c=3000, fidelities=[0.9]),
        _txn(2, 'Committed', tau_c=5000, tau_p=1000, fidelities=[1.0]),
        _txn(3, 'AbortedTemporal', reason='no_tuple'),
        _txn(4, 'AbortedPhysical', tau_c=4000, parent=3, reason='herald_loss_measurement'),
    ]

    records = (_records(3, 'HeraldedTimeoutAbort', 'ErasureMarker')
               + _records(3, 'DegradedQubit', 'PauliFrameUpdate')
               + _records(4, 'HeraldedPhysicalLoss', 'ErasureMarker')
               + _records(4, 'DegradedQubit', 'PauliFrameUpdate')
               + _records(4, 'UnheraldedDecoherence', 'DepolarizingNoise'))

    return {
        'seed': 1,
        'transactions': transactions,
        'records': records,
        'ledger_counts': {'generated': 10, 'consumed': 4, 'expired': 5, 'available': 1, 'reserved': 0,
                          'released': 2},
        'tau_q_ns': 100000,
        'tau_q_p_ns': 50000,
        'analysers': [],
    }


class WindowTest(unittest.TestCase):
    '''
    tau_compute = tau_q - (tau_c + tau_p).
    '''
    def test_compute_window(self):
        '''
        Plain arithmetic, negative windows included.
        '''
        cases = [
            {
                'args': (100000, 3000, 1000),
                'expected': 96000,
                'description': 'A comfortable window',
            },

            {
                'args': (1000, 900, 200),
                'expected': -100,
                'description': 'Infeasible regime',
            },

            {
                'args': (5000, 0, 0),
                'expected': 5000,
                'description': 'Free coordination',
            },
        ]

        for case in cases:
            self.assertEqual(compute_window(*case['args']), case['expected'], case['description'])

        for delta in (1, 10, 1000):
            self.assertEqual(compute_window(100000, 3000 + delta, 1000), compute_window(100000, 3000, 1000) - delta)

    def test_window_stats(self):
        '''
        Averaged over the committed transactions only.
        '''
        stats = window_stats(_run_record()['transactions'], 100000)

        self.assertEqual(stats['mean_compute_window_ns'], 95500)
        self.assertEqual(stats['min_compute_window_ns'], 94000)
        self.assertEqual(stats['mean_tau_c_realized_ns'], 4000)
        self.assertEqual(stats['mean_tau_p_ns'], 500)
        self.assertEqual(stats['negative_windows'], 0)
        self.assertAlmostEqual(stats['mean_fidelity'], 0.95)

        empty = window_stats([], 100000)
        self.assertIsNone(empty['mean_compute_window_ns'])
        self.assertIsNone(empty['min_compute_window_ns'])


class ThresholdTest(unittest.TestCase):
    '''
    The effective threshold check.
    '''
    def test_verdict(self):
        '''
        Depolarizing threshold first, then the erasure regime when erasures
        dominate.
        '''
        cases = [
            {
                'args': (0.005, 0.0),
                'expected': ThresholdVerdict.WITHIN_DEPOLARIZING_THRESHOLD,
                'description': 'Below the depolarizing threshold',
            },

            {
                'args': (0.02, 0.9),
                'expected': ThresholdVerdict.WITHIN_ERASURE_REGIME_ONLY,
                'description': 'Dominated by erasures, below the erasure threshold',
            },

            {
                'args': (0.02, 0.3),
                'expected': ThresholdVerdict.ABOVE_ALL_THRESHOLDS,
                'description': 'Not enough erasures to count on the erasure threshold',
            },

            {
                'args': (0.05, 0.99),
                'expected': ThresholdVerdict.ABOVE_ALL_THRESHOLDS,
                'description': 'Above the erasure threshold',
            },

            {
                'args': (0.0094, 0.0),
                'expected': ThresholdVerdict.ABOVE_ALL_THRESHOLDS,
                'description': 'The threshold itself is not below it',
            },

            {
                'args': (0.02, 0.5),
                'expected': ThresholdVerdict.WITHIN_ERASURE_REGIME_ONLY,
                'description': 'Exactly the dominance fraction',
            },

            {
                'args': (0.02, 0.49),
                'expected': ThresholdVerdict.ABOVE_ALL_THRESHOLDS,
                'description': 'Just short of the dominance fraction',
            },

            {
                'args': (0.0094, 0.9),
                'expected': ThresholdVerdict.WITHIN_ERASURE_REGIME_ONLY,
                'description': 'The depolarizing threshold itself falls through to the erasure regime',
            },

            {
                'args': (0.0093, 0.0),
                'expected': ThresholdVerdict.WITHIN_DEPOLARIZING_THRESHOLD,
                'description': 'Just below the depolarizing threshold',
            },

            {
                'args': (0.031, 0.9),
                'expected': ThresholdVerdict.ABOVE_ALL_THRESHOLDS,
                'description': 'The erasure threshold itself is not below it',
            },

            {
                'args': (0.0309, 0.9),
                'expected': ThresholdVerdict.WITHIN_ERASURE_REGIME_ONLY,
                'description': 'Just below the erasure threshold',
            },
        ]

        dominant = ThresholdSettings(dominance_fraction=0.9)
        self.assertEqual(effective_threshold_check(0.02, 0.9, dominant), ThresholdVerdict.WITHIN_ERASURE_REGIME_ONLY,
                         'A configured dominance fraction is inclusive too')
        self.assertEqual(effective_threshold_check(0.02, 0.89, dominant), ThresholdVerdict.ABOVE_ALL_THRESHOLDS,
                         'Below a configured dominance fraction')

        for case in cases:
            self.assertEqual(effective_threshold_check(*case['args']), case['expected'], case['description'])

        self.assertRaises(ValueError, effective_threshold_check, 1.5, 0.0)
        self.assertRaises(ValueError, effective_threshold_check, 0.01, -0.1)
        self.assertRaises(ValueError, ThresholdSettings, dominance_fraction=1.5)
        self.assertRaises(ValueError, ThresholdSettings, depolarizing_threshold=0.05)

    def test_residual_rate(self):
        '''
        Background rate plus the unheralded records per participant
        operation, at most one.
        '''
        record = _run_record()

        self.assertAlmostEqual(residual_depolarizing_rate(record['transactions'], record['records']), 0.25)
        self.assertAlmostEqual(residual_depolarizing_rate([], [], 0.001), 0.001)
        self.assertEqual(residual_depolarizing_rate(record['transactions'], record['records'], 0.9), 1.0)


class CompositionTest(unittest.TestCase):
    '''
    Counting the failure records.
    '''
    def test_composition(self):
        '''
        The Pauli frame updates are not errors.
        '''
        composition = record_composition(_run_record()['records'])

        self.assertEqual(composition['n_erasure'], 4)
        self.assertEqual(composition['n_depolarizing'], 2)
        self.assertEqual(composition['n_pauli_frame'], 4)
        self.assertAlmostEqual(composition['erasure_fraction'], 4 / 6)
        self.assertAlmostEqual(composition['depolarizing_fraction'], 2 / 6)
        self.assertEqual(composition['record_counts'], {
            'HeraldedTimeoutAbort': 2,
            'HeraldedPhysicalLoss': 2,
            'UnheraldedDecoherence': 2,
            'DegradedQubit': 4,
        })

        self.assertIsNone(record_composition([])['erasure_fraction'])

    def test_outcomes(self):
        '''
        Terminal states and abort reasons.
        '''
        outcomes = outcome_counts(_run_record()['transactions'])

        self.assertEqual(outcomes['n_transactions'], 4)
        self.assertEqual(outcomes['n_committed'], 2)
        self.assertEqual(outcomes['n_aborted_temporal'], 1)
        self.assertEqual(outcomes['n_aborted_physical'], 1)
        self.assertEqual(outcomes['n_retries'], 1)
        self.assertEqual(outcomes['abort_rate'], 0.5)
        self.assertEqual(outcomes['abort_reasons'], {'herald_loss_measurement': 1, 'no_tuple': 1})

        self.assertIsNone(outcome_counts([])['abort_rate'])


class PipelineTest(unittest.TestCase):
    '''
    The analysers, run in order over one record.
    '''
    def test_default_analysers(self):
        '''
        Each analyser appends its output and the last one assembles the
        report.
        '''
        analysers = default_analysers()
        record = _run_record()

        for analyser in analysers:
            record = analyser.run(record)

        self.assertEqual([output['analyser'] for output in record['analysers']], [
            'OutcomeAnalyser',
            'ComputeWindowAnalyser',
            'ErasureCompositionAnalyser',
            'TimingContractAnalyser',
            'ConservationAnalyser',
            'ThresholdAnalyser',
            'MetricsReportAnalyser',
        ])

        self.assertEqual(find_output(record, 'TimingContractAnalyser'), [])
        self.assertEqual(find_output(record, 'ConservationAnalyser'), {'conserved': True, 'reserved_at_end': 0})
        self.assertEqual(find_output(record, 'ThresholdAnalyser')['threshold_verdict'], 'AboveAllThresholds')

        report = analysers[-1].report
        self.assertEqual(report.n_transactions, 4)
        self.assertEqual(report.n_generated, 10)
        self.assertEqual(report.n_released, 2)
        self.assertEqual(report.mean_compute_window_ns, 95500)
        self.assertAlmostEqual(report.residual_depolarizing_rate, 0.25)
        self.assertEqual(report.threshold_verdict, 'AboveAllThresholds')
        self.assertEqual(report.as_dict()['erasure_threshold_band'], [0.031, 0.0415])

    def test_report_alone(self):
        '''
        Without the other analysers the report computes everything itself.
        '''
        alone = MetricsReportAnalyser()
        alone.run(_run_record())

        pipeline = default_analysers()
        record = _run_record()
        for analyser in pipeline:
            record = analyser.run(record)

        self.assertEqual(alone.report, pipeline[-1].report)

    def test_single_analysers(self):
        '''
        A few analysers on their own.
        '''
        record = _run_record()
        record['transactions'][0]['coordination_ns'] = 50000

        self.assertEqual(len(TimingContractAnalyser().run(record)['analysers'][-1]['output']), 1)
        self.assertEqual(OutcomeAnalyser().run(record)['analysers'][-1]['output']['n_committed'], 2)
        self.assertEqual(ComputeWindowAnalyser().run(record)['analysers'][-1]['output']['negative_windows'], 0)
        self.assertEqual(ErasureCompositionAnalyser().run(record)['analysers'][-1]['output']['n_erasure'], 4)

        settings = ThresholdSettings(background_depolarizing_rate=0.001)
        output = ThresholdAnalyser(settings).run(_run_record())['analysers'][-1]['output']
        self.assertAlmostEqual(output['residual_depolarizing_rate'], 0.251)

        debugger = Debugger()
        debugger.run(_run_record())
        self.assertEqual(debugger.count, 1)

    def test_conservation(self):
        '''
        A reserved tuple left at the end is flagged, a broken count is
        refused.
        '''
        record = _run_record()
        record['ledger_counts'] = dict(record['ledger_counts'], available=0, reserved=1)
        self.assertFalse(ConservationAnalyser().run(record)['analysers'][-1]['output']['conserved'])

        record = _run_record()
        record['ledger_counts'] = dict(record['ledger_counts'], available=3)
        self.assertRaises(ValueError, MetricsReportAnalyser().run, record)

        self.assertRaises(ValueError, build_report, {}, {}, {}, {'generated': 1, 'consumed': 0, 'expired': 0,
                                                                  'available': 0, 'reserved': 0},
                          0.0, ThresholdVerdict.ABOVE_ALL_THRESHOLDS, 0)


def _starvation_config(duration_ns=100000000, arrival_period_ns=10000):
    '''
    Two modules, one link attempting every microsecond, an arrival every
    10 us and no retries.
    '''
    return SimConfig(topology=Topology(positions={'A': (0, 0), 'B': (1, 0)},
                                       per_unit_latency_ns=TimingParams().per_unit_latency),
                     timing=TimingParams(tau_q=100000, tau_q_p=50000),
                     duration_ns=duration_ns,
                     seed=2024,
                     links=(LinkConfig(endpoints=('A', 'B'), attempt_period_ns=1000, eta_trans=1.0),),
                     workload=WorkloadConfig(arrival_period_ns=arrival_period_ns),
                     kernel=KernelSettings(sweep_period_ns=10000))


class StarvationTest(unittest.TestCase):
    '''
    The abort rate against the transduction efficiency.
    '''
    def test_curve(self):
        '''
        The abort rate never goes down as eta drops, and commits never beat
        the supply.
        '''
        rows = starvation_curve(_starvation_config(), [1.0, 0.1, 0.01, 0.001])

        self.assertEqual([row['eta'] for row in rows], [1.0, 0.1, 0.01, 0.001])
        self.assertEqual(rows[0]['abort_rate'], 0)

        for row in rows:
            self.assertEqual(row['n_transactions'], 10000)

        for better, worse in zip(rows, rows[1:]):
            sigma = math.sqrt(worse['abort_rate'] * (1 - worse['abort_rate']) / worse['n_transactions'])
            self.assertGreaterEqual(worse['abort_rate'] + 3 * sigma + 1e-9, better['abort_rate'])

        for row in rows:
            committed = row['commit_rate'] * row['n_transactions']
            self.assertLessEqual(committed, row['n_generated'])
            self.assertLessEqual(committed, row['expected_supply'] + 3 * math.sqrt(row['expected_supply']))

    def test_parallel(self):
        '''
        Running the points in parallel gives the same rows, in order.
        '''
        config = _starvation_config(duration_ns=1000000)

        self.assertEqual(starvation_curve(config, [0.5, 0.05], jobs=2), starvation_curve(config, [0.5, 0.05]))

    def test_no_workload(self):
        '''
        Without transactions there is no rate to report.
        '''
        rows = starvation_curve(_starvation_config(duration_ns=1000000, arrival_period_ns=0), [0.5])

        self.assertEqual(rows[0]['n_transactions'], 0)
        self.assertIsNone(rows[0]['abort_rate'])

    def test_invalid_eta(self):
        '''
        eta is a probability, zero excluded.
        '''
        self.assertRaises(ValueError, with_eta, _starvation_config(), 0)
        self.assertRaises(ValueError, starvation_curve, _starvation_config(), [0.5, 1.5])

    def test_end_to_end(self):
        '''
        The default pipeline on a real run.
        '''
        analysers = default_analysers()
        result = run_scenario(_starvation_config(duration_ns=2000000), analysers=analysers)
        report = analysers[-1].report

        self.assertEqual(report.n_transactions, len(result.transactions))
        self.assertEqual(report.n_generated, report.n_consumed + report.n_expired + report.n_available)
        self.assertEqual(report.n_committed, report.n_transactions)
        self.assertEqual(report.threshold_verdict, 'WithinDepolarizingThreshold')
        self.assertEqual(len(result.analysers), len(analysers))
