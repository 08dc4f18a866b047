"""
Enumeration of consistent cuts and width-antichains, the bijection between
them, and materialised cut lattices for the analyses that need to walk them.
"""
# Python packages
import logging
from tqdm import tqdm
from dataclasses import dataclass, field
# Local modules
from esd.utils import dotted, parse_dotted
from esd.poset import width, minimum_chain_partition
from esd.event_model import EventCut, missing_cause, vector_clocks
from esd.state_model import (
    StateModel,
    WidthAntichainCut,
    width_members,
    check_width_extensible,
    state_model_from_partition,
)
from esd.transforms import se_transform
from esd.errors import (
    NotConsistent,
    NotWidthAntichain,
    NotWidthExtensible,
    InvalidStateModel,
)

logger = logging.getLogger(__name__)


class LexicalCutEnumerator:
    """
    Enumerates the consistent cuts of an event model in lexical order of
    their frontier vectors, process 1 most significant.

    The successor of a cut f is found by trying processes from the last
    down: process k can advance iff the clock of its next event e agrees with
    f on every process before k, and the new cut then takes f up to k, e,
    and beyond k the join of e's clock with the clocks of the tops of f.
    Each attempt costs O(n) and the join O(n^2), so each cut costs O(n^2);
    ``work`` counts those elementary steps.
    """

    def __init__(self, m):
        self.model = m
        self.n = m.n
        self.lengths = tuple(m.length(i) for i in range(1, m.n + 1))
        clocks = vector_clocks(m)
        zero = (0,) * m.n
        self.clocks = [(zero,) + tuple(clocks[e] for e in events)
                       for events in m.processes]
        self.work = 0

    def successor(self, frontier):
        """ Returns the next frontier in lexical order, or None at the top """
        n = self.n
        for k in reversed(range(n)):
            self.work += 1
            if frontier[k] == self.lengths[k]:
                continue
            clock = self.clocks[k][frontier[k] + 1]
            self.work += k
            if any(clock[j] > frontier[j] for j in range(k)):
                continue
            advanced = list(frontier[:k]) + [frontier[k] + 1] + list(
                clock[k + 1:])
            for j in range(k):
                top = self.clocks[j][frontier[j]]
                for t in range(k + 1, n):
                    if top[t] > advanced[t]:
                        advanced[t] = top[t]
            self.work += n * (k + 1)
            return tuple(advanced)
        return None

    def events(self, frontier):
        return frozenset(e for events, f in zip(self.model.processes,
                                                frontier)
                         for e in events[:f])

    def __iter__(self):
        frontier = (0,) * self.n
        while frontier is not None:
            yield EventCut(self.events(frontier), frontier)
            frontier = self.successor(frontier)


def enumerate_event_cuts(m, verbose=False):
    """ Yields every consistent cut of m once, in lexical order """
    enumerator = LexicalCutEnumerator(m)
    count = 0
    for cut in tqdm(enumerator, desc='cuts', unit='cut',
                    disable=not verbose):
        count += 1
        yield cut
    logger.debug("Enumerated %d cuts with %d steps", count, enumerator.work)


def width_state_model(p):
    """
    Returns a state model of p whose chains number its width, raising
    NotWidthExtensible when p is not width-extensible
    """
    poset = p.poset if isinstance(p, StateModel) else p
    verdict = check_width_extensible(poset)
    if not verdict:
        raise NotWidthExtensible(verdict.witness)
    if isinstance(p, StateModel) and p.n == width(poset)[0]:
        return p
    return state_model_from_partition(poset)


def width_event_model(p):
    """ Returns (state model, event model) pair used to enumerate p """
    sm = width_state_model(p)
    outcome = se_transform(sm)
    if not outcome.ok:
        raise InvalidStateModel(outcome.report)
    return sm, outcome.model


def _frontier_states(sm, frontier):
    return WidthAntichainCut(frozenset(
        sm.state(i, k) for i, k in enumerate(frontier, 1)))


def enumerate_width_antichains(p, verbose=False):
    """
    Yields every width-antichain of a width-extensible poset once. The
    poset is rebuilt as an event model by the SE transform, whose cuts map
    one-to-one onto the width-antichains through their frontiers.
    """
    sm, m = width_event_model(p)
    for cut in enumerate_event_cuts(m, verbose=verbose):
        yield _frontier_states(sm, cut.frontier)


def cut_to_antichain(m, G):
    """
    Maps a consistent cut to the width-antichain of es_transform(m) holding,
    for each process, the state after its last event in the cut
    """
    events = G.events if isinstance(G, EventCut) else frozenset(G)
    missing = missing_cause(m, events)
    if missing is not None:
        raise NotConsistent(*missing)
    latest = {i: 0 for i in range(1, m.n + 1)}
    for e in events:
        for i, k in m.labels[e]:
            latest[i] = max(latest[i], k)
    return WidthAntichainCut(frozenset(dotted(i, k)
                                       for i, k in latest.items()))


def antichain_to_cut(m, T):
    """ Maps a width-antichain of es_transform(m) back to its cut """
    states = frozenset(getattr(T, 'states', T))
    frontier = {}
    for s in states:
        position = parse_dotted(s)
        if position is None:
            raise NotWidthAntichain(states, 'unknown state %r' % (s,))
        i, k = position
        if not 1 <= i <= m.n or not 0 <= k <= m.length(i):
            raise NotWidthAntichain(states, 'no state %s' % s)
        if i in frontier:
            raise NotWidthAntichain(states, 'two states on chain %d' % i)
        frontier[i] = k
    if len(frontier) != m.n:
        raise NotWidthAntichain(states, '%d states for %d chains'
                                % (len(frontier), m.n))
    events = frozenset(m.slot(i, k) for i, top in frontier.items()
                       for k in range(1, top + 1))
    if missing_cause(m, events) is not None or \
            cut_to_antichain(m, events).states != states:
        raise NotWidthAntichain(states, 'states are not pairwise concurrent')
    return EventCut(events, tuple(frontier[i] for i in range(1, m.n + 1)))


def lattice_meet_join(p, A, B):
    """
    Returns (meet, join) of two width-antichains: the per-chain minimum and
    maximum over a width-sized chain partition
    """
    poset = p.poset if isinstance(p, StateModel) else p
    A, B = width_members(poset, A), width_members(poset, B)
    if isinstance(p, StateModel) and p.n == len(A):
        cp = p.chains
    else:
        cp = minimum_chain_partition(poset)
    lows, highs = {}, {}
    for x in A | B:
        i, k = cp.locate(x)
        if i not in lows or k < cp.locate(lows[i])[1]:
            lows[i] = x
        if i not in highs or k > cp.locate(highs[i])[1]:
            highs[i] = x
    return (WidthAntichainCut(frozenset(lows.values())),
            WidthAntichainCut(frozenset(highs.values())))


@dataclass(frozen=True, eq=False)
class CutLattice:
    """
    Cuts in lexical order with covering links. successors[k] lists the
    positions of the cuts one step above cuts[k].
    """
    source: object
    order: str
    cuts: tuple
    successors: tuple
    positions: dict = field(repr=False)

    def __len__(self):
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    @property
    def bottom(self):
        return self.cuts[0]

    @property
    def top(self):
        return self.cuts[-1]

    def position(self, cut):
        key = getattr(cut, 'events', getattr(cut, 'states', cut))
        return self.positions[frozenset(key)]

    def successors_of(self, cut):
        return [self.cuts[k] for k in self.successors[self.position(cut)]]


def _link_event_cuts(m, cuts):
    positions = {cut.events: k for k, cut in enumerate(cuts)}
    successors = []
    for cut in cuts:
        above = []
        for i, f in enumerate(cut.frontier):
            if f == m.length(i + 1):
                continue
            step = positions.get(cut.events | {m.slot(i + 1, f + 1)})
            if step is not None:
                above.append(step)
        successors.append(tuple(sorted(set(above))))
    return positions, tuple(successors)


def build_cut_lattice(m, verbose=False):
    """ Materialises the consistent cuts of m with their covering links """
    cuts = tuple(enumerate_event_cuts(m, verbose=verbose))
    positions, successors = _link_event_cuts(m, cuts)
    logger.debug("Cut lattice: %d cuts, %d covers", len(cuts),
                 sum(map(len, successors)))
    return CutLattice(m, 'lexical', cuts, successors, positions)


def build_width_antichain_lattice(p, verbose=False):
    """ Materialises the width-antichains of p with their covering links """
    sm, m = width_event_model(p)
    event_cuts = tuple(enumerate_event_cuts(m, verbose=verbose))
    _, successors = _link_event_cuts(m, event_cuts)
    cuts = tuple(_frontier_states(sm, cut.frontier) for cut in event_cuts)
    positions = {cut.states: k for k, cut in enumerate(cuts)}
    logger.debug("Width-antichain lattice: %d antichains", len(cuts))
    return CutLattice(p, 'lexical', cuts, successors, positions)
