#!/usr/bin/env python3
'''
Re-check a failure record stream written by `modular_qc.py simulate`
without importing the package: every heralded record must be an erasure
marker, every unheralded one depolarizing noise, and the erasure fraction
re-derived from the stream must match the one of the metrics report.
'''
import argparse
import json
import logging
import sys

EXPECTED = {
    'HeraldedTimeoutAbort': 'ErasureMarker',
    'HeraldedPhysicalLoss': 'ErasureMarker',
    'UnheraldedDecoherence': 'DepolarizingNoise',
    'DegradedQubit': 'PauliFrameUpdate',
}

ERRORS = ('ErasureMarker', 'DepolarizingNoise')


def verify(failures, metrics=None, stalled_window_as_erasure=False):
    '''
    Return the summary of the check, its 'ok' field tells the verdict.
    '''
    expected = dict(EXPECTED)
    if stalled_window_as_erasure:
        expected['UnheraldedDecoherence'] = 'ErasureMarker'

    total = 0
    mismatches = []
    counts = {'ErasureMarker': 0, 'DepolarizingNoise': 0, 'PauliFrameUpdate': 0}

    for record in failures:
        total += 1

        if expected.get(record['kind']) != record['classification']:
            mismatches.append(record)

        if record['classification'] in counts:
            counts[record['classification']] += 1

    errors = sum(counts[classification] for classification in ERRORS)
    fraction = counts['ErasureMarker'] / errors if errors else None

    summary = {
        'records': total,
        'mismatches': len(mismatches),
        'erasure_fraction': fraction,
        'counts': counts,
    }

    ok = not mismatches
    if metrics is not None:
        reported = metrics.get('erasure_fraction')
        summary['reported_erasure_fraction'] = reported

        if (reported is None) != (fraction is None) or (fraction is not None and abs(reported - fraction) > 1e-12):
            ok = False

    summary['ok'] = ok
    return summary


def read_lines(path):
    '''
    One JSON document per line.
    '''
    with open(path) as fhandler:
        return [json.loads(line) for line in fhandler if line.strip()]


def run():
    '''
    Verify the record stream and exit with 1 if anything is off.
    '''
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    parser.add_argument('failures',
                        help='the failures.jsonl stream of a run')

    parser.add_argument('--metrics',
                        help='the metrics.jsonl of the same run, to compare the erasure fraction')

    parser.add_argument('--stalled-window-as-erasure', action='store_true',
                        help='the run reported the stalled windows as erasures')

    args = parser.parse_args()

    try:
        failures = read_lines(args.failures)
        metrics = read_lines(args.metrics)[0] if args.metrics else None
    # pylint: disable=broad-except
    except Exception as error:
        logging.error(error)
        sys.exit(1)

    summary = verify(failures, metrics, args.stalled_window_as_erasure)
    print(json.dumps(summary))

    if not summary['ok']:
        sys.exit(1)


if __name__ == '__main__':
    run()
