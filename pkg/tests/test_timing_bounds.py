'''
Causal locality bound and coordination wall.
'''
import math
import unittest
from dataclasses import replace

import numpy as np

from modular_qc.analytics import TimingParams, ScalingParams
from modular_qc.analytics import locality_bound, coordination_latency, coordination_curve
from modular_qc.analytics import coordination_wall, wall_sensitivity, wall_precedes_crossover
from modular_qc.errors import InfeasibleWallError, NoPositiveRadiusError


class TimingParamsTest(unittest.TestCase):
    '''
    Defaults and derived values.
    '''
    def test_derived_deadline(self):
        '''
        tau_q_p defaults to a fraction of tau_q, rounded half-up.
        '''
        cases = [
            {
                'params': TimingParams(),
                'expected': 100,
                'description': '0.1% of 100 us',
            },

            {
                'params': TimingParams(tau_q=100000, tau_q_p_fraction=0.5),
                'expected': 50000,
                'description': 'Half of the coherence time',
            },

            {
                'params': TimingParams(tau_q=1500, tau_q_p_fraction=0.001),
                'expected': 2,
                'description': '1.5 ns rounds up',
            },

            {
                'params': TimingParams(tau_q_p=42),
                'expected': 42,
                'description': 'An explicit deadline wins over the fraction',
            },
        ]

        for case in cases:
            self.assertEqual(case['params'].tau_q_p, case['expected'], case['description'])

        self.assertAlmostEqual(TimingParams().per_unit_latency, math.sqrt(2) * 115)

    def test_invalid(self):
        '''
        Out of range timing constants.
        '''
        cases = [
            {'kwargs': {'tau_q': 0}, 'description': 'Coherence time must be positive'},
            {'kwargs': {'tau_decode': -1}, 'description': 'Negative decode latency'},
            {'kwargs': {'tau_q_p': 200000}, 'description': 'Deadline beyond the coherence time'},
            {'kwargs': {'alpha': 0.5}, 'description': 'Routes cannot be shorter than straight lines'},
            {'kwargs': {'safety_margin': 0}, 'description': 'Safety margin in (0, 1]'},
        ]

        for case in cases:
            with self.assertRaises(ValueError, msg=case['description']):
                TimingParams(**case['kwargs'])


class LocalityBoundTest(unittest.TestCase):
    '''
    L_ctrl_max = c / (2 n) * budget.
    '''
    def test_bound(self):
        '''
        The signal must make a round trip within the budget.
        '''
        cases = [
            {
                'params': TimingParams(tau_q_p=100, tau_decode=0, tau_ff=0),
                'expected': 9.993333333,
                'description': '100 ns of budget in fiber',
            },

            {
                'params': TimingParams(tau_q=100000, tau_q_p=3000),
                'expected': 0,
                'description': 'Decode and feedforward use the whole deadline',
            },

            {
                'params': TimingParams(tau_q_p=100, tau_decode=50, tau_ff=25),
                'expected': 2.498333333,
                'description': '25 ns left',
            },
        ]

        for case in cases:
            self.assertAlmostEqual(locality_bound(case['params']), case['expected'], places=6,
                                   msg=case['description'])

    def test_negative_budget(self):
        '''
        The deficit is carried by the error.
        '''
        with self.assertRaises(NoPositiveRadiusError) as context:
            locality_bound(TimingParams())

        self.assertEqual(context.exception.deficit_ns, 2900)


class CoordinationWallTest(unittest.TestCase):
    '''
    tau_c(N) and where it hits the coherence budget.
    '''
    def test_coordination_latency(self):
        '''
        tau_decode + tau_ff + alpha sqrt(N) tau_route.
        '''
        cases = [
            {
                'params': TimingParams(),
                'n_qubits': 83516,
                'expected': 50000,
                'delta': 5,
                'description': 'The wall uses up half of the coherence time',
            },

            {
                'params': TimingParams(tau_decode=0, tau_ff=0, alpha=1, tau_route=7),
                'n_qubits': 1,
                'expected': 7,
                'delta': 1e-9,
                'description': 'Unit lattice',
            },

            {
                'params': TimingParams(),
                'n_qubits': 1e4,
                'expected': 19263.5,
                'delta': 0.5,
                'description': 'Ten thousand qubits',
            },
        ]

        for case in cases:
            self.assertAlmostEqual(coordination_latency(case['params'], case['n_qubits']), case['expected'],
                                   delta=case['delta'], msg=case['description'])

        curve = coordination_curve(TimingParams(), [1, 100, 10000])
        self.assertEqual([n for n, _ in curve], [1.0, 100.0, 10000.0])
        self.assertTrue(all(a[1] < b[1] for a, b in zip(curve, curve[1:])), 'tau_c grows with N')

    def test_wall(self):
        '''
        The wall and its sensitivity to tau_route.
        '''
        cases = [
            {
                'params': TimingParams(),
                'low': 8.2e4,
                'high': 8.5e4,
                'description': 'About 8.3e4 qubits with the default constants',
            },

            {
                'params': TimingParams(tau_route=80),
                'low': 1.7e5 * 0.95,
                'high': 1.7e5 * 1.05,
                'description': 'Faster routing moves the wall up',
            },

            {
                'params': TimingParams(tau_route=150),
                'low': 4.9e4 * 0.95,
                'high': 4.9e4 * 1.05,
                'description': 'Slower routing moves the wall down',
            },

            {
                'params': TimingParams(alpha=1, tau_route=47000),
                'low': 1,
                'high': 1,
                'description': 'A wall at a single qubit',
            },
        ]

        for case in cases:
            wall = coordination_wall(case['params'])
            self.assertGreaterEqual(wall, case['low'], case['description'])
            self.assertLessEqual(wall, case['high'], case['description'])

    def test_infeasible_wall(self):
        '''
        Decode and feedforward alone fill the budget.
        '''
        params = TimingParams(tau_q=3000, safety_margin=1.0)

        with self.assertRaises(InfeasibleWallError) as context:
            coordination_wall(params)

        self.assertEqual(context.exception.residual_ns, 0)
        self.assertRaises(InfeasibleWallError, coordination_wall, TimingParams(alpha=1, tau_route=47001))

    def test_wall_sensitivity(self):
        '''
        Evenly spaced routing latencies, both ends included.
        '''
        rows = wall_sensitivity(TimingParams(), 80, 150, 2)
        self.assertEqual([route for route, _ in rows], [80.0, 150.0])
        self.assertAlmostEqual(rows[0][1] / 1.7e5, 1, delta=0.05)
        self.assertAlmostEqual(rows[1][1] / 4.9e4, 1, delta=0.05)

        rows = wall_sensitivity(TimingParams(), 115, 115, 2)
        self.assertEqual(rows[0], rows[1], 'A degenerate range gives equal rows')

        rows = wall_sensitivity(TimingParams(), 100, 100, 2)
        self.assertAlmostEqual(rows[0][1], (47000 / (math.sqrt(2) * 100)) ** 2, places=6)

        rows = wall_sensitivity(TimingParams(), 80, 150, 8)
        self.assertEqual(len(rows), 8)
        self.assertTrue(all(a[1] > b[1] for a, b in zip(rows, rows[1:])), 'The wall drops as routing slows')

        self.assertRaises(ValueError, wall_sensitivity, TimingParams(), 150, 80, 2)
        self.assertRaises(ValueError, wall_sensitivity, TimingParams(), 80, 150, 1)

    @staticmethod
    def _random_params(rng):
        return TimingParams(tau_q=int(rng.integers(50000, 500000)),
                            tau_decode=int(rng.integers(0, 3000)),
                            tau_ff=int(rng.integers(0, 1000)),
                            tau_route=rng.uniform(20, 200),
                            alpha=rng.uniform(1, 2),
                            safety_margin=rng.uniform(0.3, 0.9))

    def test_latency_monotonicity(self):
        '''
        tau_c strictly grows with the number of qubits.
        '''
        rng = np.random.default_rng(20240605)

        for _ in range(2000):
            params = self._random_params(rng)
            small = 10 ** rng.uniform(0, 8)
            large = small * 10 ** rng.uniform(0.01, 2)

            self.assertLess(coordination_latency(params, small), coordination_latency(params, large), params)

    def test_wall_monotonicity(self):
        '''
        Any slower decode, feedforward or routing, or longer routes, move the
        wall down. A larger coherence budget moves it up. The wall is where
        tau_c reaches the budget.
        '''
        rng = np.random.default_rng(20240606)

        for _ in range(2000):
            params = self._random_params(rng)
            wall = coordination_wall(params)

            self.assertAlmostEqual(coordination_latency(params, wall) / (params.safety_margin * params.tau_q), 1,
                                   places=9, msg=params)

            slower = [
                replace(params, tau_decode=params.tau_decode + int(rng.integers(1, 1000))),
                replace(params, tau_ff=params.tau_ff + int(rng.integers(1, 1000))),
                replace(params, tau_route=params.tau_route * rng.uniform(1.01, 1.5)),
                replace(params, alpha=params.alpha * rng.uniform(1.01, 1.5)),
            ]

            for other in slower:
                self.assertLess(coordination_wall(other), wall, other)

            longer = replace(params, tau_q=params.tau_q + int(rng.integers(1, 10000)))
            self.assertGreater(coordination_wall(longer), wall, longer)

            wider = replace(params, safety_margin=params.safety_margin * rng.uniform(1.01, 1.1))
            self.assertGreater(coordination_wall(wider), wall, wider)

    def test_bound_linearity(self):
        '''
        Twice the residual budget, twice the control radius.
        '''
        cases = [
            {'budget': 100, 'decode': 0, 'ff': 0, 'description': 'Budget from the deadline alone'},
            {'budget': 1000, 'decode': 300, 'ff': 200, 'description': 'Decode and feedforward taken out'},
        ]

        for case in cases:
            single = TimingParams(tau_q_p=case['budget'] + case['decode'] + case['ff'],
                                  tau_decode=case['decode'], tau_ff=case['ff'])
            double = TimingParams(tau_q_p=2 * case['budget'] + case['decode'] + case['ff'],
                                  tau_decode=case['decode'], tau_ff=case['ff'])

            self.assertAlmostEqual(locality_bound(double) / locality_bound(single), 2, places=12,
                                   msg=case['description'])

    def test_wall_precedes_crossover(self):
        '''
        The coordination wall comes well before the economic crossover.
        '''
        self.assertTrue(wall_precedes_crossover(TimingParams(), ScalingParams()))
        self.assertIsNone(wall_precedes_crossover(TimingParams(), ScalingParams(gamma=1.5)))
        self.assertFalse(wall_precedes_crossover(TimingParams(), ScalingParams(B=1, eta_trans=1)))
