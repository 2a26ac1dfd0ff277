"""
Report the analysis result somewhere.
"""
import json
import sys
from abc import ABCMeta, abstractmethod

# Leading field of every serialized line
SCHEMA_VERSION = 1


# pylint: disable=no-init,too-few-public-methods
class Reporter:
    """
    Define the template of all reporter class.
    """
    __metaclass__ = ABCMeta

    @abstractmethod
    def publish(self, report):
        """
        Move along, nothing to see here.
        """

    def close(self):
        """
        Nothing to flush by default.
        """


class FileReporter(Reporter):
    """
    Print each report as one line of JSON, fields in the order they come in,
    after a leading schema version.
    """
    def __init__(self, path=None, mode='a'):
        """
        Note that an exception will be raised if the path is not valid or writable.
        Without a path the lines go to stdout.
        """
        self.fhandler = open(path, mode) if path else sys.stdout
        self.owned = bool(path)

    def __del__(self):
        self.close()

    def close(self):
        if getattr(self, 'owned', False) and not self.fhandler.closed:
            self.fhandler.close()

    def publish(self, report):
        """
        Empty reports are ignored.
        """
        if not report:
            return

        line = {'schema_version': SCHEMA_VERSION}
        line.update(report)

        print(json.dumps(line), file=self.fhandler)


def _cell(value):
    if value is None:
        return '-'

    if isinstance(value, float):
        return '{:.6g}'.format(value)

    if isinstance(value, (list, tuple)):
        return ','.join(_cell(item) for item in value)

    if isinstance(value, dict):
        return ','.join('{}={}'.format(key, _cell(item)) for key, item in value.items())

    return str(value)


class TableReporter(Reporter):
    """
    A plain text table, one row per report. The columns are the keys of the
    first report unless given. Nothing is written until close().
    """
    def __init__(self, path=None, columns=None, title=None):
        """
        Without a path the table goes to stdout.
        """
        self.path = path
        self.columns = list(columns) if columns else None
        self.title = title
        self.rows = []
        self.closed = False

    def publish(self, report):
        if not report:
            return

        if self.columns is None:
            self.columns = list(report)

        self.rows.append([_cell(report.get(column)) for column in self.columns])

    def render(self):
        """
        Left aligned, columns padded to their widest cell.
        """
        if not self.columns:
            return ''

        widths = [max([len(column)] + [len(row[index]) for row in self.rows])
                  for index, column in enumerate(self.columns)]

        def _line(cells):
            return '  '.join(cell.ljust(width) for cell, width in zip(cells, widths)).rstrip()

        lines = [self.title] if self.title else []
        lines.append(_line(self.columns))
        lines.append(_line(['-' * width for width in widths]))
        lines.extend(_line(row) for row in self.rows)

        return '\n'.join(lines) + '\n'

    def close(self):
        if self.closed:
            return

        self.closed = True

        if self.path is None:
            sys.stdout.write(self.render())
            return

        with open(self.path, 'w') as fhandler:
            fhandler.write(self.render())
