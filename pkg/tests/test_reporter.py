'''
Various tests for the reporter module.
'''
import json
import os
import tempfile
import unittest

from modular_qc.reporters import FileReporter, TableReporter, SCHEMA_VERSION


class FileReporterTest(unittest.TestCase):
    '''
    Test the file-based reporter.
    '''
    def setUp(self):
        '''
        Create a temporary file so that the test can write its reports into it.
        '''
        self.tmp = tempfile.NamedTemporaryFile()
        self.reporter = FileReporter(path=self.tmp.name)

    def tearDown(self):
        self.reporter.close()
        self.tmp.close()

    def test_report(self):
        '''
        Dump all the test reports to our temporary file.
        '''
        cases = [
            {
                'report': {
                    'txn_id': 1,
                    'state': 'Committed',
                    'participants': ['A', 'B'],
                },
                'description': 'Report a committed transaction',
            },

            {
                'report': {
                    'txn_id': 2,
                    'module_location': 'A',
                    'kind': 'HeraldedTimeoutAbort',
                    'classification': 'ErasureMarker',
                },
                'description': 'Report a failure record',
            },

            {
                'report': {},
                'description': 'Report nothing and thus will be ignored',
            },
        ]

        for case in cases:
            self.reporter.publish(case['report'])

        self.reporter.close()

        with open(self.tmp.name) as fhandler:
            lines = fhandler.readlines()

        self.assertEqual(len(lines), 2, 'Empty reports are not written')

        for index, line in enumerate(lines):
            got = json.loads(line)
            expected = dict(cases[index]['report'])

            self.assertEqual(list(got)[0], 'schema_version', cases[index]['description'])
            self.assertEqual(got.pop('schema_version'), SCHEMA_VERSION, cases[index]['description'])
            self.assertEqual(list(got), list(expected), 'Field order is kept: ' + cases[index]['description'])
            self.assertDictEqual(got, expected, cases[index]['description'])


class TableReporterTest(unittest.TestCase):
    '''
    Test the plain text tables.
    '''
    def test_render(self):
        '''
        Columns come from the first report, missing values and None are
        shown as a dash.
        '''
        cases = [
            {
                'reports': [
                    {'eta': 0.1, 'n_c': 1000000.0},
                    {'eta': 0.001, 'n_c': None},
                ],
                'expected': [
                    'eta    n_c',
                    '-----  -----',
                    '0.1    1e+06',
                    '0.001  -',
                ],
                'description': 'Floats are printed with 6 significant digits',
            },

            {
                'reports': [
                    {'participants': ['A', 'B'], 'committed': True},
                ],
                'expected': [
                    'participants  committed',
                    '------------  ---------',
                    'A,B           True',
                ],
                'description': 'Lists are joined with commas',
            },
        ]

        for case in cases:
            table = TableReporter()

            for report in case['reports']:
                table.publish(report)

            self.assertEqual(table.render().splitlines(), case['expected'], case['description'])

    def test_close(self):
        '''
        The table is written once, on close.
        '''
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'table.txt')

            table = TableReporter(path, title='metrics')
            table.publish({'field': 'n_committed', 'value': 3})

            self.assertFalse(os.path.exists(path), 'Nothing is written before close')
            table.close()

            with open(path) as fhandler:
                self.assertEqual(fhandler.read().splitlines()[0], 'metrics')
