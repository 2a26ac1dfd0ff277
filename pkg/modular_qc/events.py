"""
Simulation events and the event list. The list is a priority queue sorted
on (time_ns, seq) where seq is the insertion counter, so simultaneous events
pop in FIFO order.
"""
import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Any


class EventKind(Enum):
    """
    Everything that can happen in a scenario.
    """
    GENERATION_ATTEMPT = 'GenerationAttempt'
    TRANSACTION_ARRIVAL = 'TransactionArrival'
    STAGE_COMPLETE = 'StageComplete'
    EXPIRE_SWEEP = 'ExpireSweep'
    METRICS_SNAPSHOT = 'MetricsSnapshot'


@dataclass(frozen=True)
class Event:
    """
    A timestamped payload.
    """
    time_ns: int
    seq: int
    kind: EventKind
    payload: Any = None

    def __str__(self):
        return 'event({}, {}, {})'.format(self.time_ns, self.seq, self.kind.value)


class EventQueue:
    """
    Insert future events, pop them in timestamp order.
    """
    def __init__(self):
        self.pqueue = []
        self.last = 0
        self.seq = 0

    def __len__(self):
        return len(self.pqueue)

    def insert(self, time_ns, kind, payload=None) -> Event:
        """
        Events are never scheduled in the past.
        """
        if time_ns < self.last:
            raise ValueError('Cannot schedule {} at {} ns, the clock is already at {} ns'.format(
                kind.value, time_ns, self.last))

        event = Event(time_ns=int(time_ns), seq=self.seq, kind=kind, payload=payload)
        self.seq += 1

        heapq.heappush(self.pqueue, (event.time_ns, event.seq, event))
        return event

    def pop(self) -> Event:
        """
        Retrieve the event with the smallest (time, seq).
        """
        if not self.pqueue:
            raise IndexError('Pop from an empty event list')

        _, _, event = heapq.heappop(self.pqueue)
        self.last = event.time_ns

        return event
