"""
The subcommands: four analytic tables computed in closed form and two
simulation commands. Each command returns its tables as lists of plain
dicts and emits them either as text tables or as JSON records.
"""
import logging
import math
import sys
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from modular_qc import __version__
from modular_qc.analysers import Debugger, default_analysers
from modular_qc.analysers.starvation import starvation_curve
from modular_qc.analytics import architecture_phase, coordination_curve, coordination_wall, cost_homogeneous
from modular_qc.analytics import cost_modular, cost_ratio, crossover_condition, crossover_scale, expected_attempts
from modular_qc.analytics import locality_bound, logical_qubits, ops_per_coherence, sweep_crossover
from modular_qc.analytics import wall_precedes_crossover, wall_sensitivity
from modular_qc.reporters import SCHEMA_VERSION, FileReporter, RunArtifactsReporter, TableReporter
from modular_qc.simulation import Simulator
from modular_qc.transformers import Scenario, config_hash

TABLE = 'table'
RECORDS = 'records'

TOOL = 'modular-qc-analytics'

DEFAULT_ETA_SWEEP = (0.1, 0.01, 0.001)
DEFAULT_ROUTE_RANGE = (80, 150)
DEFAULT_POINTS = 25
DEFAULT_STEPS = 8

Tables = List[Tuple[str, List[Dict]]]


def emit(tables: Tables, out=None, fmt=TABLE):
    """
    Write the tables to the output path, or to stdout. In the records format
    each row becomes one JSON line tagged with the name of its table.
    """
    if fmt == RECORDS:
        reporter = FileReporter(out, mode='w')

        for title, rows in tables:
            for row in rows:
                record = {'table': title}
                record.update(row)
                reporter.publish(record)

        reporter.close()
        return

    if fmt != TABLE:
        raise ValueError('Unknown output format {}'.format(fmt))

    text = '\n'.join(_render(title, rows) for title, rows in tables)

    if out:
        with open(out, 'w') as fhandler:
            fhandler.write(text)
    else:
        sys.stdout.write(text)


def _render(title, rows):
    if not rows:
        return '{}\n(no rows)\n'.format(title)

    table = TableReporter(title=title)

    for row in rows:
        table.publish(row)

    return table.render()


def _grid(top_exponent, points):
    if points < 2:
        raise ValueError('At least two grid points are needed, got {}'.format(points))

    return np.logspace(0, top_exponent, points)


def _n_c(value):
    return 'none' if value is None else value


def crossover_tables(scenario: Scenario, eta_values: Optional[Sequence[float]] = None,
                     points=DEFAULT_POINTS) -> Tables:
    """
    C_hom and C_mod over a log-spaced N grid reaching two decades past the
    crossover, the crossover itself and how it moves with eta.
    """
    params = scenario.scaling
    n_c = crossover_scale(params)

    top = math.ceil(math.log10(n_c)) + 2 if n_c else 12
    curve = [{
        'n_qubits': float(n),
        'n_logical': logical_qubits(float(n), params.kappa),
        'c_hom': cost_homogeneous(params, float(n)),
        'c_mod': cost_modular(params, float(n)),
        'ratio': cost_ratio(params, float(n)),
        'phase': architecture_phase(params, float(n)).value,
    } for n in _grid(top, points)]

    crossover = [{
        'A': params.A,
        'B': params.B,
        'epsilon': params.epsilon,
        'gamma': params.gamma,
        'eta_trans': params.eta_trans,
        'condition': crossover_condition(params),
        'n_c': _n_c(n_c),
        'n_c_logical': logical_qubits(n_c, params.kappa) if n_c else None,
    }]

    eta_values = eta_values or scenario.eta_sweep or DEFAULT_ETA_SWEEP
    sweep = [{
        'eta_trans': eta,
        'expected_attempts': expected_attempts(eta),
        'n_c': _n_c(value),
        'n_c_logical': logical_qubits(value, params.kappa) if value else None,
    } for eta, value in sweep_crossover(params, eta_values)]

    return [('crossover', crossover), ('cost_curve', curve), ('eta_sweep', sweep)]


def cmd_crossover(scenario: Scenario, out=None, fmt=TABLE, eta_values=None, points=DEFAULT_POINTS) -> Tables:
    """
    Emit the crossover tables.
    """
    tables = crossover_tables(scenario, eta_values=eta_values, points=points)
    emit(tables, out, fmt)
    return tables


def wall_tables(scenario: Scenario, route_min=None, route_max=None, steps=DEFAULT_STEPS,
                points=DEFAULT_POINTS) -> Tables:
    """
    The coordination wall, tau_c(N) up to a decade past it and the
    sensitivity of the wall to tau_route.
    """
    timing = scenario.timing
    wall = coordination_wall(timing)
    budget = timing.safety_margin * timing.tau_q

    precedes = wall_precedes_crossover(timing, scenario.scaling)
    summary = [{
        'wall_n': wall,
        'tau_route_ns': timing.tau_route,
        'alpha': timing.alpha,
        'tau_decode_ns': timing.tau_decode,
        'tau_ff_ns': timing.tau_ff,
        'budget_ns': budget,
        'crossover_n_c': _n_c(crossover_scale(scenario.scaling)),
        'wall_precedes_crossover': precedes,
    }]

    curve = [{
        'n_qubits': n,
        'tau_c_ns': tau_c,
        'within_budget': tau_c <= budget,
    } for n, tau_c in coordination_curve(timing, _grid(math.log10(wall) + 1, points))]

    route_min = DEFAULT_ROUTE_RANGE[0] if route_min is None else route_min
    route_max = DEFAULT_ROUTE_RANGE[1] if route_max is None else route_max

    sensitivity = [{'tau_route_ns': route, 'wall_n': value}
                   for route, value in wall_sensitivity(timing, route_min, route_max, steps)]

    if precedes is False:
        logging.warning('The coordination wall (%g) comes after the crossover scale', wall)

    return [('coordination_wall', summary), ('coordination_curve', curve), ('wall_sensitivity', sensitivity)]


def cmd_wall(scenario: Scenario, out=None, fmt=TABLE, route_min=None, route_max=None, steps=DEFAULT_STEPS,
             points=DEFAULT_POINTS) -> Tables:
    """
    Emit the coordination wall tables.
    """
    tables = wall_tables(scenario, route_min=route_min, route_max=route_max, steps=steps, points=points)
    emit(tables, out, fmt)
    return tables


def cmd_bound(scenario: Scenario, out=None, fmt=TABLE) -> Tables:
    """
    The maximum control radius, with the inputs it was computed from.
    """
    timing = scenario.timing

    tables = [('locality_bound', [{
        'l_ctrl_max_m': locality_bound(timing),
        'tau_q_p_ns': timing.tau_q_p,
        'tau_decode_ns': timing.tau_decode,
        'tau_ff_ns': timing.tau_ff,
        'budget_ns': timing.tau_q_p - timing.tau_decode - timing.tau_ff,
        'refractive_index_n': timing.refractive_index_n,
        'light_speed_c': timing.light_speed_c,
    }])]

    emit(tables, out, fmt)
    return tables


def cmd_nops(scenario: Scenario, out=None, fmt=TABLE) -> Tables:
    """
    Operations per coherence window of each platform, next to the figure
    printed in the catalog.
    """
    rows = []

    for platform in scenario.catalog:
        n_ops = (None, None) if platform.memory_only else ops_per_coherence(platform)

        rows.append({
            'platform': platform.name,
            'tau_q_min_s': platform.tau_q_min,
            'tau_q_max_s': platform.tau_q_max,
            'tau_gate_min_s': platform.tau_gate_min,
            'tau_gate_max_s': platform.tau_gate_max,
            'n_ops_min': n_ops[0],
            'n_ops_max': n_ops[1],
            'printed_n_ops': platform.printed_n_ops,
            'profile': platform.profile,
        })

    tables = [('ops_per_coherence', rows)]

    emit(tables, out, fmt)
    return tables


def manifest(scenario: Scenario, seed) -> Dict:
    """
    What identifies a run. No timestamps, so that reruns are byte-identical.
    """
    return {
        'tool': TOOL,
        'version': __version__,
        'schema_version': SCHEMA_VERSION,
        'seed': seed,
        'config_hash': config_hash(scenario),
        'duration_ns': scenario.duration_ns,
        'annotations': dict(scenario.annotations),
    }


def cmd_simulate(scenario: Scenario, out_dir, seed=None, debug=False):
    """
    Run the scenario and write the metrics report, the transaction log, the
    failure records and the manifest into out_dir. Returns the metrics
    report. With debug, the run summary is logged before the analysis.
    """
    config = scenario.sim_config(seed=seed)

    analysers = default_analysers(scenario.threshold)
    if debug:
        analysers.insert(0, Debugger())
    reporter = RunArtifactsReporter(out_dir, manifest(scenario, config.seed))

    Simulator(config, analysers=analysers, reporters=reporter).run()

    report = analysers[-1].report
    logging.info('%d transactions, commit rate %s, verdict %s', report.n_transactions, report.commit_rate,
                 report.threshold_verdict)

    return report


def cmd_starve(scenario: Scenario, eta_values, out=None, fmt=TABLE, seed=None, jobs=1) -> Tables:
    """
    The starvation curve, one simulation per eta.
    """
    config = scenario.sim_config(seed=seed)

    tables = [('starvation', starvation_curve(config, list(eta_values), jobs=jobs))]

    emit(tables, out, fmt)
    return tables

