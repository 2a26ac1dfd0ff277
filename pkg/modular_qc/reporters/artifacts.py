"""
Write the artifacts of a simulation run into a directory. Each artifact
exists twice: as line-delimited JSON for the machines and as a text table
for the humans.
"""
import logging
import os

from modular_qc.analysers import find_output

from .base import FileReporter, Reporter, TableReporter

METRICS = 'metrics'
TRANSACTIONS = 'transactions'
FAILURES = 'failures'
MANIFEST = 'manifest'

TRANSACTION_COLUMNS = ('txn_id', 'parent_txn_id', 'participants', 'state', 'abort_reason', 'created_ns',
                       'finished_ns', 'estimate_ns', 'tau_c_ns', 'tau_p_ns')


class RunArtifactsReporter(Reporter):
    """
    Publish the metrics report, the transaction log, the failure records
    and the run manifest of a finished run.
    """
    def __init__(self, out_dir, manifest):
        """
        The manifest is what identifies the run: tool version, seed, config
        hash. Existing artifacts in the directory are overwritten.
        """
        os.makedirs(out_dir, exist_ok=True)

        self.out_dir = out_dir
        self.manifest = manifest
        self.written = []

    def _path(self, name, extension):
        path = os.path.join(self.out_dir, '{}.{}'.format(name, extension))
        self.written.append(path)
        return path

    def _write(self, name, reports, columns=None, vertical=False):
        machine = FileReporter(self._path(name, 'jsonl'), mode='w')
        table = TableReporter(self._path(name, 'txt'), columns=('field', 'value') if vertical else columns)

        for report in reports:
            machine.publish(report)

            if vertical:
                for key, value in report.items():
                    table.publish({'field': key, 'value': value})
            else:
                table.publish(report)

        machine.close()
        table.close()

    def publish(self, report):
        """
        The record must have gone through the MetricsReportAnalyser.
        """
        metrics = find_output(report, 'MetricsReportAnalyser')
        if metrics is None:
            raise ValueError('The run record carries no metrics report')

        manifest = dict(self.manifest)
        manifest.update({
            'event_digest': report['event_digest'],
            'end_ns': report['end_ns'],
        })

        self._write(METRICS, [metrics], vertical=True)
        self._write(TRANSACTIONS, report['transactions'], columns=TRANSACTION_COLUMNS)
        self._write(FAILURES, report['records'])
        self._write(MANIFEST, [manifest], vertical=True)

        logging.info('Wrote %d artifacts to %s', len(self.written), self.out_dir)
