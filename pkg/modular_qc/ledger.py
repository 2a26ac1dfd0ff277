"""
The entanglement ledger: the live inventory of pre-distributed entangled
pairs that the classical control plane allocates. Each entry is a metadata
tuple e_ij = (i, j, F, tau_q^(p), t_gen) with an absolute expiration date.

The ledger is owned by the simulation event loop. There is exactly one
writer and all mutations happen in event order.
"""
import heapq
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from modular_qc.errors import ProtocolViolationError, UnknownTupleError


def link_key(module_i, module_j):
    """
    Links are unordered pairs, store them in a canonical order.
    """
    if module_i == module_j:
        raise ValueError('A link needs two distinct modules, got {} twice'.format(module_i))

    return (module_i, module_j) if str(module_i) <= str(module_j) else (module_j, module_i)


class TupleState(Enum):
    """
    Lifecycle of an entanglement tuple. Consumed and Expired are terminal.
    """
    AVAILABLE = 'available'
    RESERVED = 'reserved'
    CONSUMED = 'consumed'
    EXPIRED = 'expired'


class ReserveOutcome(Enum):
    """
    What a reservation attempt returns.
    """
    OK = 'ok'
    CONFLICT = 'conflict'
    EXPIRED = 'expired'


class SelectionPolicy(Enum):
    """
    Which available tuple a query hands out.
    """
    # Maximum deadline first, it leaves the widest margin for the pre-check
    YOUNGEST_FIRST = 'youngest_first'
    OLDEST_FIRST = 'oldest_first'


@dataclass
class EntanglementTuple:
    """
    One pre-distributed entangled pair and where it is in its lifecycle.
    """
    tuple_id: int
    endpoints: Tuple[str, str]
    fidelity: float
    t_gen_ns: int
    deadline_ns: int
    state: TupleState = TupleState.AVAILABLE
    # The transaction holding the reservation, kept after expiry so that
    # it can be notified
    holder: Optional[int] = None
    # Set once a rollback handed the tuple back
    released: bool = False
    closed_ns: Optional[int] = None

    def __post_init__(self):
        if self.endpoints[0] == self.endpoints[1]:
            raise ValueError('Tuple {} links a module with itself'.format(self.tuple_id))

        if self.deadline_ns <= self.t_gen_ns:
            raise ValueError('Tuple {} expires before it is generated'.format(self.tuple_id))

        if not 0 < self.fidelity <= 1:
            raise ValueError('Tuple {} has an invalid fidelity {}'.format(self.tuple_id, self.fidelity))

    @property
    def live(self):
        """
        Available or Reserved.
        """
        return self.state in (TupleState.AVAILABLE, TupleState.RESERVED)

    def as_dict(self):
        """
        Plain dict in a stable field order, for serialization.
        """
        return {
            'tuple_id': self.tuple_id,
            'endpoint_i': self.endpoints[0],
            'endpoint_j': self.endpoints[1],
            'fidelity': self.fidelity,
            't_gen_ns': self.t_gen_ns,
            'deadline_ns': self.deadline_ns,
            'state': self.state.value,
            'holder': self.holder,
            'released': self.released,
            'closed_ns': self.closed_ns,
        }


def composite_eta(hop_etas) -> float:
    """
    A repeater chain is modeled as a single end-to-end link, its success
    probability being the product over the hops.
    """
    if not hop_etas:
        raise ValueError('A repeater chain needs at least one hop')

    eta = 1.0
    for hop_eta in hop_etas:
        if not 0 < hop_eta <= 1:
            raise ValueError('Hop success probability must be in (0, 1], got {}'.format(hop_eta))
        eta *= hop_eta

    return eta


@dataclass(frozen=True)
class LinkConfig:
    """
    A background generator of entangled pairs between two modules. Either a
    fixed fidelity (fidelity_min == fidelity_max) or a uniform range.
    """
    endpoints: Tuple[str, str]
    attempt_period_ns: int
    eta_trans: float
    fidelity_min: float = 1.0
    fidelity_max: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'endpoints', link_key(*self.endpoints))

        if self.attempt_period_ns <= 0:
            raise ValueError('Attempt period must be positive, got {}'.format(self.attempt_period_ns))

        if not 0 < self.eta_trans <= 1:
            raise ValueError('Transduction efficiency must be in (0, 1], got {}'.format(self.eta_trans))

        if not 0 < self.fidelity_min <= self.fidelity_max <= 1:
            raise ValueError('Invalid fidelity range {} - {}'.format(self.fidelity_min, self.fidelity_max))

    @property
    def name(self):
        """
        Used to name the random stream of the link.
        """
        return 'link:{}|{}'.format(*self.endpoints)


def expected_supply(link: LinkConfig, window_ns: int) -> float:
    """
    Expected number of tuples generated in a window starting at an attempt,
    i.e. attempts in the window times eta.
    """
    attempts = math.ceil(window_ns / link.attempt_period_ns)
    return attempts * link.eta_trans


def attempt_generate(link: LinkConfig, now_ns: int, rng, lifetime_ns: int,
                     tuple_id: int) -> Optional[EntanglementTuple]:
    """
    One generation attempt. Exactly one draw decides the success and one
    more draws the fidelity on success, so the trace only depends on the
    seed of the stream.
    """
    if rng.random() >= link.eta_trans:
        return None

    fidelity = link.fidelity_min + rng.random() * (link.fidelity_max - link.fidelity_min)

    return EntanglementTuple(tuple_id=tuple_id,
                             endpoints=link.endpoints,
                             fidelity=fidelity,
                             t_gen_ns=now_ns,
                             deadline_ns=now_ns + lifetime_ns)


class EntanglementLedger:
    """
    Keep track of every tuple ever generated.
    """
    def __init__(self, lifetime_ns, policy=SelectionPolicy.YOUNGEST_FIRST, min_fidelity=0.0):
        """
        The lifetime is tau_q^(p): a tuple generated at t_gen can be used
        strictly before t_gen + lifetime.
        """
        if lifetime_ns <= 0:
            raise ValueError('Tuple lifetime must be positive, got {}'.format(lifetime_ns))

        self.lifetime_ns = lifetime_ns
        self.policy = policy
        self.min_fidelity = min_fidelity

        self.tuples: Dict[int, EntanglementTuple] = {}
        # Available tuples per link
        self._available: Dict[Tuple[str, str], set] = {}
        # (deadline, tuple_id) of the live tuples, for sweeping
        self._deadlines: List[Tuple[int, int]] = []
        self._live = set()
        self._next_id = 1

    def __len__(self):
        return len(self.tuples)

    def _get(self, tuple_id):
        if tuple_id not in self.tuples:
            raise UnknownTupleError('Unknown tuple {}'.format(tuple_id))

        return self.tuples[tuple_id]

    def add(self, entry: EntanglementTuple):
        """
        Insert a freshly generated tuple.
        """
        self.tuples[entry.tuple_id] = entry
        self._available.setdefault(entry.endpoints, set()).add(entry.tuple_id)
        self._live.add(entry.tuple_id)
        heapq.heappush(self._deadlines, (entry.deadline_ns, entry.tuple_id))
        self._next_id = max(self._next_id, entry.tuple_id + 1)

    def generate(self, link: LinkConfig, now_ns: int, rng) -> Optional[EntanglementTuple]:
        """
        Run one generation attempt on the link and record the result.
        """
        entry = attempt_generate(link, now_ns, rng, self.lifetime_ns, self._next_id)

        if entry:
            self.add(entry)

        return entry

    def _expire(self, entry, now_ns):
        if entry.state == TupleState.AVAILABLE:
            self._available[entry.endpoints].discard(entry.tuple_id)

        self._live.discard(entry.tuple_id)
        entry.state = TupleState.EXPIRED
        entry.closed_ns = now_ns

    def query(self, endpoints, now_ns) -> Optional[int]:
        """
        Find a usable tuple on the link. Anything past its deadline that we
        come across is swept to Expired on the way.
        """
        key = link_key(*endpoints)
        candidates = []

        for tuple_id in sorted(self._available.get(key, ())):
            entry = self.tuples[tuple_id]

            if entry.deadline_ns <= now_ns:
                self._expire(entry, now_ns)
                continue

            if entry.fidelity < self.min_fidelity:
                continue

            candidates.append(entry)

        if not candidates:
            return None

        if self.policy == SelectionPolicy.YOUNGEST_FIRST:
            chosen = min(candidates, key=lambda e: (-e.deadline_ns, e.tuple_id))
        else:
            chosen = min(candidates, key=lambda e: (e.deadline_ns, e.tuple_id))

        return chosen.tuple_id

    def reserve(self, tuple_id, txn_id, now_ns) -> ReserveOutcome:
        """
        Lock the tuple for one transaction.
        """
        entry = self._get(tuple_id)

        if entry.state == TupleState.EXPIRED:
            return ReserveOutcome.EXPIRED

        if entry.state == TupleState.CONSUMED:
            return ReserveOutcome.CONFLICT

        if entry.state == TupleState.RESERVED:
            return ReserveOutcome.OK if entry.holder == txn_id else ReserveOutcome.CONFLICT

        if entry.deadline_ns <= now_ns:
            self._expire(entry, now_ns)
            return ReserveOutcome.EXPIRED

        self._available[entry.endpoints].discard(tuple_id)
        entry.state = TupleState.RESERVED
        entry.holder = txn_id

        return ReserveOutcome.OK

    def release(self, tuple_id, txn_id):
        """
        Roll a reservation back. The deadline is absolute so the remaining
        lifetime does not change.
        """
        entry = self._get(tuple_id)

        if entry.state != TupleState.RESERVED or entry.holder != txn_id:
            raise ProtocolViolationError('Transaction {} cannot release tuple {} ({}, held by {})'.format(
                txn_id, tuple_id, entry.state.value, entry.holder))

        entry.state = TupleState.AVAILABLE
        entry.holder = None
        entry.released = True
        self._available[entry.endpoints].add(tuple_id)

    def consume(self, tuple_id, txn_id, now_ns):
        """
        Spend the tuple for good. Only the holder can do it, and only
        strictly before the deadline.
        """
        entry = self._get(tuple_id)

        if entry.state != TupleState.RESERVED or entry.holder != txn_id:
            raise ProtocolViolationError('Transaction {} cannot consume tuple {} ({}, held by {})'.format(
                txn_id, tuple_id, entry.state.value, entry.holder))

        if now_ns >= entry.deadline_ns:
            raise ProtocolViolationError('Tuple {} consumed at {} ns, past its deadline {} ns'.format(
                tuple_id, now_ns, entry.deadline_ns))

        self._live.discard(tuple_id)
        entry.state = TupleState.CONSUMED
        entry.closed_ns = now_ns

    def expire_sweep(self, now_ns) -> List[int]:
        """
        Expire every live tuple whose deadline has passed. The reserved ones
        keep their holder so the caller can notify the transaction.
        """
        expired = []

        while self._deadlines and self._deadlines[0][0] <= now_ns:
            _, tuple_id = heapq.heappop(self._deadlines)
            entry = self.tuples[tuple_id]

            if not entry.live:
                continue

            self._expire(entry, now_ns)
            expired.append(tuple_id)

        return expired

    def counts(self) -> Dict[str, int]:
        """
        Number of tuples in each state, plus the total ever generated.
        """
        counts = {state.value: 0 for state in TupleState}

        for entry in self.tuples.values():
            counts[entry.state.value] += 1

        counts['generated'] = len(self.tuples)
        counts['released'] = sum(1 for entry in self.tuples.values() if entry.released)

        return counts

    def conserved(self) -> bool:
        """
        Every tuple is in exactly one state.
        """
        counts = self.counts()
        return sum(counts[state.value] for state in TupleState) == counts['generated']

    def live_snapshot(self):
        """
        The state of every live tuple, to compare before and after a
        rolled back reservation.
        """
        return frozenset((tuple_id, self.tuples[tuple_id].state, self.tuples[tuple_id].holder)
                         for tuple_id in self._live)

    def snapshot(self):
        """
        Export all tuples, read-only, for metrics.
        """
        return [self.tuples[tuple_id].as_dict() for tuple_id in sorted(self.tuples)]
