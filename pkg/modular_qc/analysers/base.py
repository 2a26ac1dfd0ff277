"""
Analyse the result of a simulation run.
"""
import json
import logging
from abc import ABCMeta, abstractmethod


# pylint: disable=no-init,too-few-public-methods
class Analyser:
    """
    Define the template of all analyser class.
    """
    __metaclass__ = ABCMeta

    @abstractmethod
    def run(self, record):
        """
        In normal cases, an analyser will process the record, save the result
        into the record, and then return the updated record so that the next
        analyser can choose what to do next. The structure of the record
        comes from RunResult.as_record() as follows:

            {
                seed: INTEGER,
                duration_ns: INTEGER,
                end_ns: INTEGER,
                event_counts: {
                    EVENT KIND: INTEGER
                },
                event_digest: SHA256,
                transactions: [
                    TRANSACTION
                ],
                records: [
                    FAILURE RECORD
                ],
                ledger_counts: {
                    TUPLE STATE: INTEGER
                },
                tau_q_ns: INTEGER,
                tau_q_p_ns: INTEGER,
                snapshots: [
                    LEDGER COUNTS
                ],

                # This is a place holder field which are used later by the
                # analysers. Each analyser will append its result here.
                analysers: [
                    {
                        analyser: ANALYSER NAME,
                        output: ANYTHING GOES HERE,
                    },
                ],
            }
        """

    def append(self, record, output):
        """
        Save the output of this analyser into the record.
        """
        if 'analysers' not in record:
            record['analysers'] = []

        record['analysers'].append({
            'analyser': type(self).__name__,
            'output': output,
        })

        return record


def find_output(record, analyser_name):
    """
    The output of an earlier analyser in the pipeline, None if it did not run.
    """
    for analyser in record.get('analysers', []):
        if analyser['analyser'] == analyser_name:
            return analyser['output']

    return None


class Debugger(Analyser):
    """
    A dummy analyser for debugging.
    """
    def __init__(self):
        """
        Keep track of the number of records so far for debugging purpose.
        """
        self.count = 0

    def run(self, record):
        '''
        This is a dummy analyser that will only log the summary of the run it
        processes, the full record can be huge.
        '''
        logging.debug(json.dumps({
            'seed': record.get('seed'),
            'event_counts': record.get('event_counts'),
            'ledger_counts': record.get('ledger_counts'),
        }))

        # Update the number of records so far
        self.count += 1

        return self.append(record, self.count)
