"""
Where transactions come from: either a fixed-period arrival process over
random module pairs, or an explicit trace of arrivals for regression tests.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

# How the participants of a fixed-rate arrival are chosen
RANDOM_PAIR = 'random_pair'
RANDOM_LINK = 'random_link'

FIXED_RATE = 'fixed_rate'
TRACE = 'trace'


@dataclass(frozen=True)
class TraceArrival:
    """
    One scripted transaction arrival.
    """
    time_ns: int
    participants: Tuple[str, ...]


@dataclass(frozen=True)
class WorkloadConfig:
    """
    The default is no workload at all: an arrival period of 0 disables the
    fixed-rate process.
    """
    mode: str = FIXED_RATE
    arrival_period_ns: int = 0
    start_ns: int = 0
    participants: str = RANDOM_PAIR
    links_per_pair: int = 1
    max_transactions: Optional[int] = None
    trace: Tuple[TraceArrival, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.mode not in (FIXED_RATE, TRACE):
            raise ValueError('Unknown workload mode {}'.format(self.mode))

        if self.participants not in (RANDOM_PAIR, RANDOM_LINK):
            raise ValueError('Unknown participants rule {}'.format(self.participants))

        if self.arrival_period_ns < 0 or self.start_ns < 0:
            raise ValueError('Arrival period and start time must be >= 0')

        if self.links_per_pair < 1:
            raise ValueError('A transaction needs at least one tuple per pair')

        if self.max_transactions is not None and self.max_transactions < 0:
            raise ValueError('max_transactions must be >= 0')

        for arrival in self.trace:
            if len(set(arrival.participants)) != len(arrival.participants) or len(arrival.participants) < 2:
                raise ValueError('Trace arrival at {} ns needs at least two distinct modules'.format(
                    arrival.time_ns))

    @property
    def enabled(self):
        """
        Whether any transaction will ever arrive.
        """
        if self.mode == TRACE:
            return bool(self.trace)

        return self.arrival_period_ns > 0 and self.max_transactions != 0


class WorkloadGenerator:
    """
    Draw the participants of each arrival from the workload stream.
    """
    def __init__(self, config: WorkloadConfig, modules, links, rng):
        self.config = config
        self.modules = list(modules)
        self.links = [link.endpoints for link in links]
        self.rng = rng
        self.issued = 0

    def draw_participants(self) -> Tuple[str, str]:
        """
        A uniformly random pair of distinct modules, or a uniformly random
        configured link.
        """
        if self.config.participants == RANDOM_LINK:
            return self.links[int(self.rng.integers(len(self.links)))]

        first, second = self.rng.choice(len(self.modules), size=2, replace=False)
        return self.modules[int(first)], self.modules[int(second)]

    def next_arrival(self, now_ns, duration_ns) -> Optional[int]:
        """
        Time of the following fixed-rate arrival, or None when the workload
        is exhausted.
        """
        if self.config.max_transactions is not None and self.issued >= self.config.max_transactions:
            return None

        upcoming = now_ns + self.config.arrival_period_ns
        return upcoming if upcoming < duration_ns else None

    def schedule_trace(self, duration_ns) -> List[TraceArrival]:
        """
        The trace arrivals that fall inside the run, in time order.
        """
        return sorted((arrival for arrival in self.config.trace if arrival.time_ns < duration_ns),
                      key=lambda arrival: arrival.time_ns)
