"""
The event-based model: events under happened-before, each labelled with the
(process, index) slots it occupies. An event with several slots is shared by
those processes (a barrier or a synchronous exchange).
"""
# Python packages
import logging
import numpy as np
from collections import defaultdict
from dataclasses import dataclass
# Local modules
from esd.poset import build_poset, minimum_chain_partition
from esd.errors import (
    BadLabel,
    BadChainIndex,
    BadChainPartition,
    EmptyProcess,
    IndexGap,
    NotTotallyOrdered,
    UnknownElement,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EventModel:
    """ Events, their happened-before order and the slots they occupy """
    poset: object
    n: int
    labels: dict
    processes: tuple

    @property
    def events(self):
        return self.poset.elements

    def length(self, i):
        """ Returns n_i, the number of events on process i """
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise BadChainIndex(i, self.n)
        return len(self.processes[i - 1])

    def slot(self, i, k):
        """ Returns the event occupying slot (i, k) """
        events = self.processes[i - 1] if 1 <= i <= self.n else ()
        if not 1 <= k <= len(events):
            raise UnknownElement('(%d,%d)' % (i, k))
        return events[k - 1]

    def signature(self):
        """ Returns the model with event ids forgotten, for comparisons """
        slots = {e: frozenset(self.labels[e]) for e in self.events}
        order = frozenset((slots[a], slots[b])
                          for a, b in self.poset.relation_pairs())
        return self.n, frozenset(slots.values()), order


@dataclass(frozen=True)
class EventCut:
    """ Downward-closed event set; frontier counts its events per process """
    events: frozenset
    frontier: tuple = None

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(sorted(self.events))


def build_event_model(poset, n, labels, allow_empty_process=False):
    """
    Validates an event model. Every event needs a nonempty slot set with at
    most one slot per process; the events of each process must be totally
    ordered and indexed 1..n_i along that order.
    """
    if not isinstance(n, int) or n < 0:
        raise BadChainPartition("Process count must be a non-negative "
                                "integer, got %r" % (n,), n=n)
    for e in labels:
        poset.locate(e)
    normalized = {}
    per_process = defaultdict(list)
    for e in poset.elements:
        slots = list(labels.get(e, ()))
        if not slots:
            raise BadLabel(e, 'no slots')
        seen = set()
        for proc, idx in slots:
            if not isinstance(proc, int) or not 1 <= proc <= n:
                raise BadLabel(e, 'process %r outside 1..%d' % (proc, n))
            if not isinstance(idx, int):
                raise BadLabel(e, 'index %r is not an integer' % (idx,))
            if proc in seen:
                raise BadLabel(e, 'two slots on process %d' % proc)
            seen.add(proc)
            per_process[proc].append((idx, e))
        normalized[e] = tuple(sorted((proc, idx) for proc, idx in slots))
    processes = []
    for i in range(1, n + 1):
        entries = sorted(per_process[i])
        events = [e for _, e in entries]
        _check_total(poset, i, events)
        indices = [k for k, _ in entries]
        in_order = all(poset.less(a, b) for a, b in zip(events, events[1:]))
        if indices != list(range(1, len(events) + 1)) or not in_order:
            raise IndexGap(i, indices)
        if not events and not allow_empty_process:
            raise EmptyProcess(i)
        processes.append(tuple(events))
    logger.debug("Built event model: %d events on %d processes",
                 len(poset), n)
    return EventModel(poset, n, normalized, tuple(processes))


def _check_total(poset, process, events):
    """ Raises NotTotallyOrdered for the first concurrent pair """
    if len(events) < 2:
        return
    rows = [poset.locate(e) for e in events]
    block = poset.closure[np.ix_(rows, rows)]
    related = block | block.T
    np.fill_diagonal(related, True)
    if not related.all():
        a, b = np.argwhere(~related)[0]
        raise NotTotallyOrdered(process, (events[a], events[b]))


def build_event_model_from_processes(process_events, edges=(),
                                     allow_empty_process=False):
    """
    Builds an event model from per-process event sequences. An event listed
    on several processes is shared by them; consecutive events of a process
    are ordered implicitly and all other causality comes from edges.
    """
    labels = {}
    pairs = list(edges)
    for i, events in enumerate(process_events, 1):
        for k, e in enumerate(events, 1):
            labels.setdefault(e, []).append((i, k))
        pairs.extend(zip(events, events[1:]))
    poset = build_poset(labels, pairs)
    return build_event_model(poset, len(process_events), labels,
                             allow_empty_process=allow_empty_process)


def is_asc(m):
    """ Checks no event is shared, i.e. every label is a single slot """
    return all(len(slots) == 1 for slots in m.labels.values())


def missing_cause(m, events):
    """
    Returns (event, cause) for an event of the set whose cause is missing,
    or None when the set is downward closed
    """
    events = set(events)
    for e in sorted(events):
        m.poset.locate(e)
    for e in sorted(events):
        missing = m.poset.below(e) - events
        if missing:
            return e, min(missing)
    return None


def is_consistent_cut(m, G):
    """ Checks G is downward closed under happened-before """
    events = G.events if isinstance(G, EventCut) else G
    return missing_cause(m, events) is None


def vector_clocks(m):
    """
    Returns, for every event, how many events of each process lie at or
    below it. The events of one process below a given event form a prefix,
    so each entry is also the index of the latest such event.
    """
    closure = m.poset.closure
    rows = [np.array([m.poset.locate(f) for f in events], dtype=int)
            for events in m.processes]
    clocks = {}
    for e in m.events:
        column = closure[:, m.poset.locate(e)]
        own = dict(m.labels[e])
        clocks[e] = tuple(int(column[row].sum()) + (1 if i in own else 0)
                          for i, row in enumerate(rows, 1))
    return clocks


def event_model_from_partition(p):
    """ Reads a bare poset as an event model over a minimum chain partition """
    cp = minimum_chain_partition(p)
    labels = {x: [(i, k + 1)] for i, chain in enumerate(cp.chains, 1)
              for k, x in enumerate(chain)}
    return build_event_model(p, cp.n, labels)
