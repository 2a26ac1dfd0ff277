"""
The classical control graph between modules. Two flavours:

    - grid: modules sit on integer 2D positions and signals follow
      Manhattan routes, each lattice unit costing alpha * tau_route;
    - graph: an explicit edge list with a latency per edge, signals take the
      shortest path.
"""
import itertools
from typing import Dict, Optional, Tuple

import networkx as nx

from modular_qc.errors import UnknownModuleError


class Topology:
    """
    Where the modules are and how long a classical signal takes between
    them. Latencies are returned as floats in ns, the simulator rounds them.
    """
    GRID = 'grid'
    GRAPH = 'graph'

    def __init__(self, positions=None, edges=None, per_unit_latency_ns=None, gate_ns=None):
        """
        Give either the grid positions {module: (x, y)} together with the
        per-unit latency, or the edge list [(module_i, module_j, latency_ns)].

        The optional gate_ns maps a module to its local gate time, modules
        without an entry use the protocol default.
        """
        if (positions is None) == (edges is None):
            raise ValueError('A topology is either a grid (positions) or a graph (edges)')

        self.gate_ns: Dict[str, int] = dict(gate_ns or {})
        self._cache: Dict[Tuple[str, str], Tuple[float, int]] = {}

        if positions is not None:
            self.mode = Topology.GRID
            self.positions = {module: tuple(pos) for module, pos in positions.items()}

            if per_unit_latency_ns is None or per_unit_latency_ns < 0:
                raise ValueError('Grid routing needs a non-negative per-unit latency')

            if len(set(self.positions.values())) != len(self.positions):
                raise ValueError('Two modules share the same grid position')

            self.per_unit_latency_ns = per_unit_latency_ns
            self.modules = sorted(self.positions)

        else:
            self.mode = Topology.GRAPH
            self.graph = nx.Graph()

            for module_i, module_j, latency in edges:
                if latency < 0:
                    raise ValueError('Edge {} - {} has a negative latency'.format(module_i, module_j))

                self.graph.add_edge(module_i, module_j, latency_ns=latency)

            if not self.graph.number_of_nodes() or not nx.is_connected(self.graph):
                raise ValueError('The classical control graph must be connected')

            self.per_unit_latency_ns = None
            self.modules = sorted(self.graph.nodes)

        for module in self.gate_ns:
            self._check(module)

    def __contains__(self, module):
        return module in self.modules

    def _check(self, module):
        if module not in self.modules:
            raise UnknownModuleError('Unknown module {}'.format(module))

    def _route(self, module_i, module_j):
        """
        Latency and hop count of the route, memoized.
        """
        key = (module_i, module_j) if module_i <= module_j else (module_j, module_i)

        if key not in self._cache:
            if self.mode == Topology.GRID:
                (x_i, y_i), (x_j, y_j) = self.positions[module_i], self.positions[module_j]
                hops = abs(x_i - x_j) + abs(y_i - y_j)
                self._cache[key] = (hops * self.per_unit_latency_ns, hops)

            else:
                path = nx.shortest_path(self.graph, source=key[0], target=key[1], weight='latency_ns')
                latency = sum(self.graph[u][v]['latency_ns'] for u, v in zip(path, path[1:]))
                self._cache[key] = (float(latency), len(path) - 1)

        return self._cache[key]

    def latency(self, module_i, module_j) -> float:
        """
        Symmetric, and zero only between a module and itself.
        """
        self._check(module_i)
        self._check(module_j)

        if module_i == module_j:
            return 0.0

        return self._route(module_i, module_j)[0]

    def hops(self, module_i, module_j) -> int:
        """
        Number of lattice units or edges on the route.
        """
        self._check(module_i)
        self._check(module_j)

        if module_i == module_j:
            return 0

        return self._route(module_i, module_j)[1]

    def local_gate_ns(self, module, default_ns) -> int:
        """
        The local gate time of a module.
        """
        self._check(module)
        return self.gate_ns.get(module, default_ns)

    def diameter_latency(self) -> float:
        """
        The worst pairwise latency, the control radius of the whole machine.
        """
        return max((self.latency(i, j) for i, j in itertools.combinations(self.modules, 2)), default=0.0)

    def as_dict(self) -> Dict:
        """
        Canonical form, for the scenario dump.
        """
        if self.mode == Topology.GRID:
            topology = {
                'mode': Topology.GRID,
                'modules': {module: list(self.positions[module]) for module in self.modules},
            }
        else:
            topology = {
                'mode': Topology.GRAPH,
                'edges': sorted([sorted([u, v]) + [data['latency_ns']]
                                 for u, v, data in self.graph.edges(data=True)]),
            }

        if self.gate_ns:
            topology['gate_ns'] = {module: self.gate_ns[module] for module in sorted(self.gate_ns)}

        return topology


def classical_latency(topology: Topology, module_i, module_j) -> float:
    """
    Classical latency between two modules, in ns.
    """
    return topology.latency(module_i, module_j)


def max_pairwise(topology: Topology, participants) -> Tuple[float, Optional[int]]:
    """
    The slowest pair among the participants, as (latency, hops).
    """
    worst, worst_hops = 0.0, 0

    for module_i, module_j in itertools.combinations(participants, 2):
        latency = topology.latency(module_i, module_j)

        if latency > worst:
            worst, worst_hops = latency, topology.hops(module_i, module_j)

    return worst, worst_hops
