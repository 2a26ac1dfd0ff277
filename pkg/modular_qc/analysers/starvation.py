"""
Resource starvation: how the abort rate grows as the transduction
efficiency of the links drops while the demand stays the same.
"""
import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List

from modular_qc.ledger import expected_supply
from modular_qc.simulation import SimConfig, run_scenario

from .run_analysers import MetricsReportAnalyser


def with_eta(config: SimConfig, eta) -> SimConfig:
    """
    The same scenario with eta substituted on every link.
    """
    if not 0 < eta <= 1:
        raise ValueError('Transduction efficiency must be in (0, 1], got {}'.format(eta))

    links = tuple(dataclasses.replace(link, eta_trans=eta) for link in config.links)
    return dataclasses.replace(config, links=links)


def starvation_point(config: SimConfig, eta) -> Dict:
    """
    Run one point of the curve.
    """
    point = with_eta(config, eta)

    analyser = MetricsReportAnalyser()
    run_scenario(point, analysers=[analyser])
    report = analyser.report

    return {
        'eta': eta,
        'n_transactions': report.n_transactions,
        'abort_rate': report.abort_rate,
        'commit_rate': report.commit_rate,
        'mean_compute_window_ns': report.mean_compute_window_ns,
        'n_generated': report.n_generated,
        'expected_supply': sum(expected_supply(link, point.duration_ns) for link in point.links),
    }


def starvation_curve(base_config: SimConfig, eta_values, jobs=1) -> List[Dict]:
    """
    One run per eta, same seed. The points are independent and can run in
    parallel; the rows come back in input order either way.
    """
    # Check them all before running anything
    for eta in eta_values:
        with_eta(base_config, eta)

    logging.info('Running the starvation curve over %d points with %d jobs', len(eta_values), jobs)

    if jobs > 1 and len(eta_values) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(starvation_point, [base_config] * len(eta_values), eta_values))

    return [starvation_point(base_config, eta) for eta in eta_values]
