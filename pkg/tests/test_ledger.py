'''
The entanglement ledger and the background generation of tuples.
'''
import math
import unittest

import numpy as np

from modular_qc.errors import ProtocolViolationError, UnknownTupleError
from modular_qc.ledger import EntanglementLedger, EntanglementTuple, LinkConfig, SelectionPolicy
from modular_qc.ledger import TupleState, ReserveOutcome
from modular_qc.ledger import attempt_generate, composite_eta, expected_supply, link_key


def _tuple(tuple_id, deadline_ns, t_gen_ns=0, endpoints=('A', 'B'), fidelity=1.0):
    return EntanglementTuple(tuple_id=tuple_id,
                             endpoints=endpoints,
                             fidelity=fidelity,
                             t_gen_ns=t_gen_ns,
                             deadline_ns=deadline_ns)


class GenerationTest(unittest.TestCase):
    '''
    Stochastic generation attempts.
    '''
    def test_certain_success(self):
        '''
        eta = 1 always produces a tuple, with the deadline set from the
        lifetime.
        '''
        link = LinkConfig(endpoints=('B', 'A'), attempt_period_ns=10, eta_trans=1.0)
        rng = np.random.default_rng(1)

        for now in range(0, 1000, 10):
            entry = attempt_generate(link, now, rng, lifetime_ns=500, tuple_id=now + 1)

            self.assertIsNotNone(entry)
            self.assertEqual(entry.endpoints, ('A', 'B'), 'Endpoints are stored in canonical order')
            self.assertEqual(entry.deadline_ns, now + 500)
            self.assertEqual(entry.state, TupleState.AVAILABLE)

    def test_success_count(self):
        '''
        The number of successes is binomial.
        '''
        cases = [
            {
                'eta': 0.1,
                'attempts': 100000,
                'description': 'Ten percent efficiency',
            },

            {
                'eta': 1e-9,
                'attempts': 1000,
                'description': 'Near certain failure',
            },
        ]

        for case in cases:
            link = LinkConfig(endpoints=('A', 'B'), attempt_period_ns=1, eta_trans=case['eta'])
            ledger = EntanglementLedger(lifetime_ns=10)
            rng = np.random.default_rng(7)

            for now in range(case['attempts']):
                ledger.generate(link, now, rng)

            mean = case['attempts'] * case['eta']
            sigma = math.sqrt(case['attempts'] * case['eta'] * (1 - case['eta']))

            self.assertLessEqual(abs(len(ledger) - mean), max(3 * sigma, 1), case['description'])

    def test_fidelity_range(self):
        '''
        The heralded fidelity is drawn within the configured range.
        '''
        link = LinkConfig(endpoints=('A', 'B'), attempt_period_ns=1, eta_trans=1.0,
                          fidelity_min=0.9, fidelity_max=0.99)
        rng = np.random.default_rng(3)

        fidelities = [attempt_generate(link, 0, rng, 10, index).fidelity for index in range(1, 200)]
        self.assertTrue(all(0.9 <= fidelity <= 0.99 for fidelity in fidelities))

    def test_link_helpers(self):
        '''
        Repeater chains, expected supply and canonical keys.
        '''
        self.assertAlmostEqual(composite_eta([0.5, 0.5, 0.4]), 0.1)
        self.assertRaises(ValueError, composite_eta, [])
        self.assertRaises(ValueError, composite_eta, [0.5, 0])

        link = LinkConfig(endpoints=('A', 'B'), attempt_period_ns=1000, eta_trans=0.1)
        self.assertAlmostEqual(expected_supply(link, 10000), 1.0)
        self.assertAlmostEqual(expected_supply(link, 10500), 1.1)
        self.assertEqual(link.name, 'link:A|B')

        self.assertEqual(link_key('B', 'A'), ('A', 'B'))
        self.assertRaises(ValueError, link_key, 'A', 'A')
        self.assertRaises(ValueError, LinkConfig, endpoints=('A', 'B'), attempt_period_ns=0, eta_trans=0.1)


class LedgerTest(unittest.TestCase):
    '''
    Query, reserve, release, consume and expire.
    '''
    def test_query(self):
        '''
        The youngest usable tuple is handed out by default.
        '''
        cases = [
            {
                'tuples': [],
                'now': 0,
                'policy': SelectionPolicy.YOUNGEST_FIRST,
                'expected': None,
                'description': 'An empty ledger has nothing to offer',
            },

            {
                'tuples': [_tuple(1, 100), _tuple(2, 200)],
                'now': 50,
                'policy': SelectionPolicy.YOUNGEST_FIRST,
                'expected': 2,
                'description': 'The largest deadline leaves the widest margin',
            },

            {
                'tuples': [_tuple(1, 100), _tuple(2, 200)],
                'now': 50,
                'policy': SelectionPolicy.OLDEST_FIRST,
                'expected': 1,
                'description': 'The oldest first policy',
            },

            {
                'tuples': [_tuple(1, 200), _tuple(2, 200)],
                'now': 50,
                'policy': SelectionPolicy.YOUNGEST_FIRST,
                'expected': 1,
                'description': 'Ties go to the smallest id',
            },

            {
                'tuples': [_tuple(1, 100)],
                'now': 150,
                'policy': SelectionPolicy.YOUNGEST_FIRST,
                'expected': None,
                'description': 'A tuple past its deadline is not usable',
            },

            {
                'tuples': [_tuple(1, 100, endpoints=('A', 'C'))],
                'now': 0,
                'policy': SelectionPolicy.YOUNGEST_FIRST,
                'expected': None,
                'description': 'Tuples of another link are ignored',
            },
        ]

        for case in cases:
            ledger = EntanglementLedger(lifetime_ns=1000, policy=case['policy'])
            for entry in case['tuples']:
                ledger.add(entry)

            self.assertEqual(ledger.query(('B', 'A'), case['now']), case['expected'], case['description'])

        ledger = EntanglementLedger(lifetime_ns=1000)
        ledger.add(_tuple(1, 100))
        ledger.query(('A', 'B'), 150)
        self.assertEqual(ledger.tuples[1].state, TupleState.EXPIRED, 'The query sweeps what it comes across')

    def test_min_fidelity(self):
        '''
        Low fidelity tuples are filtered out.
        '''
        ledger = EntanglementLedger(lifetime_ns=1000, min_fidelity=0.95)
        ledger.add(_tuple(1, 500, fidelity=0.9))
        ledger.add(_tuple(2, 400, fidelity=0.97))

        self.assertEqual(ledger.query(('A', 'B'), 0), 2)

    def test_reserve(self):
        '''
        Mutual exclusion and deadline semantics.
        '''
        ledger = EntanglementLedger(lifetime_ns=1000)
        ledger.add(_tuple(1, 100))
        ledger.add(_tuple(2, 100))

        cases = [
            {
                'tuple_id': 1,
                'txn_id': 10,
                'now': 50,
                'expected': ReserveOutcome.OK,
                'description': 'An available tuple before its deadline',
            },

            {
                'tuple_id': 1,
                'txn_id': 11,
                'now': 50,
                'expected': ReserveOutcome.CONFLICT,
                'description': 'The same tuple for a second transaction',
            },

            {
                'tuple_id': 1,
                'txn_id': 10,
                'now': 60,
                'expected': ReserveOutcome.OK,
                'description': 'Reserving twice for the same transaction is idempotent',
            },

            {
                'tuple_id': 2,
                'txn_id': 11,
                'now': 100,
                'expected': ReserveOutcome.EXPIRED,
                'description': 'A tuple is dead at its deadline',
            },
        ]

        for case in cases:
            got = ledger.reserve(case['tuple_id'], case['txn_id'], case['now'])
            self.assertEqual(got, case['expected'], case['description'])

        self.assertEqual(ledger.tuples[1].holder, 10)
        self.assertEqual(ledger.tuples[2].state, TupleState.EXPIRED)
        self.assertRaises(UnknownTupleError, ledger.reserve, 99, 10, 0)

    def test_release(self):
        '''
        A rollback hands the tuple back with its original deadline.
        '''
        ledger = EntanglementLedger(lifetime_ns=1000)
        ledger.add(_tuple(1, 100))

        self.assertEqual(ledger.reserve(1, 10, 0), ReserveOutcome.OK)
        self.assertIsNone(ledger.query(('A', 'B'), 0), 'A reserved tuple is not available')
        self.assertRaises(ProtocolViolationError, ledger.release, 1, 11)

        ledger.release(1, 10)
        self.assertEqual(ledger.tuples[1].state, TupleState.AVAILABLE)
        self.assertEqual(ledger.tuples[1].deadline_ns, 100)
        self.assertEqual(ledger.query(('A', 'B'), 10), 1)
        self.assertRaises(ProtocolViolationError, ledger.release, 1, 10)

    def test_consume(self):
        '''
        Only the holder consumes, and only before the deadline.
        '''
        ledger = EntanglementLedger(lifetime_ns=1000)
        ledger.add(_tuple(1, 100))
        ledger.add(_tuple(2, 100))
        ledger.reserve(1, 10, 0)
        ledger.reserve(2, 10, 0)

        self.assertRaises(ProtocolViolationError, ledger.consume, 1, 11, 50)
        self.assertRaises(ProtocolViolationError, ledger.consume, 2, 10, 100)

        ledger.consume(1, 10, 99)
        self.assertEqual(ledger.tuples[1].state, TupleState.CONSUMED)
        self.assertRaises(ProtocolViolationError, ledger.consume, 1, 10, 99)

    def test_expire_sweep(self):
        '''
        Everything past its deadline goes, reserved tuples keep their holder.
        '''
        ledger = EntanglementLedger(lifetime_ns=1000)
        ledger.add(_tuple(1, 100))
        ledger.add(_tuple(2, 150))
        ledger.add(_tuple(3, 300))
        ledger.reserve(2, 10, 0)

        self.assertEqual(ledger.expire_sweep(99), [])
        self.assertEqual(sorted(ledger.expire_sweep(200)), [1, 2])
        self.assertEqual(ledger.tuples[2].holder, 10)
        self.assertEqual(ledger.expire_sweep(200), [], 'A tuple expires once')

        counts = ledger.counts()
        self.assertEqual(counts['expired'], 2)
        self.assertEqual(counts['available'], 1)
        self.assertEqual(counts['generated'], 3)
        self.assertTrue(ledger.conserved())

    def test_live_snapshot(self):
        '''
        The snapshot only changes when a live tuple does.
        '''
        ledger = EntanglementLedger(lifetime_ns=1000)
        ledger.add(_tuple(1, 100))
        ledger.add(_tuple(2, 100))

        before = ledger.live_snapshot()
        ledger.reserve(1, 10, 0)
        self.assertNotEqual(ledger.live_snapshot(), before)

        ledger.release(1, 10)
        self.assertEqual(ledger.live_snapshot(), before)

        ledger.reserve(2, 10, 0)
        ledger.consume(2, 10, 1)
        self.assertEqual(len(ledger.live_snapshot()), 1)

        exported = ledger.snapshot()
        self.assertEqual([entry['tuple_id'] for entry in exported], [1, 2])
        self.assertTrue(exported[0]['released'])
        self.assertEqual(exported[1]['state'], 'consumed')
