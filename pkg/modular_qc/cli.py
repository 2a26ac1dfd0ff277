"""
Analytic tables and simulations of modular quantum architectures: the
crossover scale between homogeneous and modular layouts, the coordination
wall, the causal locality bound, operations per coherence window and the
Reserve-Commit protocol over a stochastic entanglement supply.
"""
import argparse
import logging
import sys

from modular_qc import commands
from modular_qc.errors import ConfigError, InvariantViolation, ModularQCError
from modular_qc.transformers import Scenario, ScenarioTransformer, parse_duration

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_INVARIANT = 3

EPILOG = '''
examples:
\033[1;33mmodular_qc.py crossover --eta 0.1 0.01 0.001\033[0m

\033[1;33mmodular_qc.py wall --route-min 80ns --route-max 150ns --steps 8\033[0m

\033[1;33mmodular_qc.py simulate tests/scenario-two-modules.yaml --seed 42 --out run/\033[0m

\033[1;33mmodular_qc.py starve tests/scenario-two-modules.yaml --eta 0.001 0.01 0.1 1 --jobs 4\033[0m
'''


def build_parser():
    """
    One subcommand per table or simulation.
    """
    parser = argparse.ArgumentParser(description=__doc__, epilog=EPILOG,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)

    parser.add_argument('--verbose', action='store_true',
                        help='log at debug level')

    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    def _common(subparser, config_required=False):
        if config_required:
            subparser.add_argument('config', help='the scenario file')
        else:
            subparser.add_argument('config', nargs='?', help='the scenario file, defaults are used without one')

        subparser.add_argument('--out',
                               help='where to write the output, stdout if not set')
        subparser.add_argument('--format', choices=[commands.TABLE, commands.RECORDS], default=commands.TABLE,
                               help='text tables or one JSON record per line')
        subparser.add_argument('--verbose', action='store_true', default=argparse.SUPPRESS,
                               help='log at debug level')

    crossover = subparsers.add_parser('crossover', help='crossover scale of the cost model')
    _common(crossover)
    crossover.add_argument('--eta', type=float, nargs='+',
                           help='the transduction efficiencies to sweep')
    crossover.add_argument('--points', type=int, default=commands.DEFAULT_POINTS,
                           help='number of points of the N grid')

    wall = subparsers.add_parser('wall', help='coordination wall of a monolithic layout')
    _common(wall)
    wall.add_argument('--route-min',
                      help='lowest tau_route of the sensitivity table, e.g. 80ns')
    wall.add_argument('--route-max',
                      help='highest tau_route of the sensitivity table, e.g. 150ns')
    wall.add_argument('--steps', type=int, default=commands.DEFAULT_STEPS,
                      help='number of tau_route values in the sensitivity table')
    wall.add_argument('--points', type=int, default=commands.DEFAULT_POINTS,
                      help='number of points of the tau_c(N) curve')

    bound = subparsers.add_parser('bound', help='causal locality bound on the control radius')
    _common(bound)

    nops = subparsers.add_parser('nops', help='operations per coherence window of each platform')
    _common(nops)

    simulate = subparsers.add_parser('simulate', help='run a scenario')
    simulate.add_argument('config', help='the scenario file')
    simulate.add_argument('--out', required=True,
                          help='the directory of the run artifacts')
    simulate.add_argument('--seed', type=int,
                          help='override the seed of the scenario')
    simulate.add_argument('--verbose', action='store_true', default=argparse.SUPPRESS,
                          help='log at debug level')

    starve = subparsers.add_parser('starve', help='abort rate against the transduction efficiency')
    _common(starve, config_required=True)
    starve.add_argument('--eta', type=float, nargs='+', required=True,
                        help='the transduction efficiencies to run')
    starve.add_argument('--seed', type=int,
                        help='override the seed of the scenario')
    starve.add_argument('--jobs', type=int, default=1,
                        help='number of scenario points run in parallel')

    return parser


def _scenario(path) -> Scenario:
    return ScenarioTransformer().load(path) if path else Scenario()


def dispatch(args):
    """
    Run the selected subcommand.
    """
    scenario = _scenario(args.config)

    if args.command == 'crossover':
        commands.cmd_crossover(scenario, out=args.out, fmt=args.format, eta_values=args.eta, points=args.points)

    elif args.command == 'wall':
        route_min = parse_duration(args.route_min, '--route-min') if args.route_min else None
        route_max = parse_duration(args.route_max, '--route-max') if args.route_max else None

        commands.cmd_wall(scenario, out=args.out, fmt=args.format, route_min=route_min, route_max=route_max,
                          steps=args.steps, points=args.points)

    elif args.command == 'bound':
        commands.cmd_bound(scenario, out=args.out, fmt=args.format)

    elif args.command == 'nops':
        commands.cmd_nops(scenario, out=args.out, fmt=args.format)

    elif args.command == 'simulate':
        commands.cmd_simulate(scenario, args.out, seed=args.seed, debug=args.verbose)

    elif args.command == 'starve':
        if args.jobs < 1:
            raise ConfigError('--jobs must be >= 1, got {}'.format(args.jobs))

        commands.cmd_starve(scenario, args.eta, out=args.out, fmt=args.format, seed=args.seed, jobs=args.jobs)


def main(argv=None):
    """
    Parse the arguments, run the command and map the errors to exit codes:
    2 for a bad configuration, 3 for a broken invariant.
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(asctime)s %(levelname)s %(message)s',
                        stream=sys.stderr)

    try:
        dispatch(args)

    except ConfigError as error:
        logging.error('Invalid configuration: %s', error)
        return EXIT_CONFIG

    except InvariantViolation as error:
        logging.error('Invariant violation: %s', error)
        return EXIT_INVARIANT

    except (ModularQCError, ValueError) as error:
        logging.error(error)
        return EXIT_ERROR

    return EXIT_OK


def run():
    """
    Entry point of the script.
    """
    sys.exit(main())
