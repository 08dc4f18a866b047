"""
Finite posets: closure, comparability, width, chain partitions and the
brute-force oracles that the faster algorithms are checked against.
"""
# Python packages
import logging
import numpy as np
import networkx as nx
from enum import Enum
from dataclasses import dataclass, field
# Local modules
from esd.config import oracle_bound
from esd.errors import (
    CycleError,
    UnknownElement,
    DuplicateElement,
    BadChainIndex,
    BadChainPartition,
    NotTotallyOrdered,
    OracleBoundExceeded,
    InternalConsistencyError,
)

logger = logging.getLogger(__name__)


class Relation(Enum):
    LESS = 'less'
    GREATER = 'greater'
    EQUAL = 'equal-element'
    CONCURRENT = 'concurrent'


@dataclass(frozen=True, eq=False)
class Poset:
    """ Strict partial order stored as its cover DAG plus closure matrix """
    elements: tuple
    graph: nx.DiGraph
    closure: np.ndarray
    index: dict

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        try:
            return x in self.index
        except TypeError:
            return False

    def locate(self, x):
        """ Returns the row of x in the closure matrix """
        try:
            return self.index[x]
        except (KeyError, TypeError):
            raise UnknownElement(x)

    def less(self, a, b):
        """ Returns True iff a < b """
        return bool(self.closure[self.locate(a), self.locate(b)])

    def concurrent(self, a, b):
        """ Returns True iff a and b are distinct and incomparable """
        i, j = self.locate(a), self.locate(b)
        return i != j and not self.closure[i, j] and not self.closure[j, i]

    def below(self, x):
        """ Returns the set of elements strictly below x """
        column = self.closure[:, self.locate(x)]
        return {self.elements[i] for i in np.flatnonzero(column)}

    def above(self, x):
        """ Returns the set of elements strictly above x """
        row = self.closure[self.locate(x)]
        return {self.elements[i] for i in np.flatnonzero(row)}

    def relation_pairs(self):
        """ Returns every pair (a, b) with a < b, sorted """
        rows, cols = np.nonzero(self.closure)
        return sorted((self.elements[i], self.elements[j])
                      for i, j in zip(rows, cols))

    def cover_pairs(self):
        return sorted(self.graph.edges())

    def restrict(self, subset):
        """ Returns the sub-poset on subset with the induced order """
        subset = set(subset)
        for x in subset:
            self.locate(x)
        pairs = [(a, b) for a, b in self.relation_pairs()
                 if a in subset and b in subset]
        return build_poset(subset, pairs)

    def same_order(self, other):
        """ Checks two posets have the same elements and the same order """
        return (self.elements == other.elements and
                bool(np.array_equal(self.closure, other.closure)))


@dataclass(frozen=True)
class ChainPartition:
    """ Ordered chains, each listed low to high; chain indices are 1-based """
    chains: tuple
    lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        chains = tuple(tuple(chain) for chain in self.chains)
        object.__setattr__(self, 'chains', chains)
        object.__setattr__(self, 'lookup', {
            x: (i, k) for i, chain in enumerate(chains, 1)
            for k, x in enumerate(chain)})

    @property
    def n(self):
        return len(self.chains)

    def __len__(self):
        return len(self.chains)

    def chain(self, i):
        if not isinstance(i, int) or not 1 <= i <= self.n:
            raise BadChainIndex(i, self.n)
        return self.chains[i - 1]

    def locate(self, x):
        """ Returns (chain index, position) of x """
        try:
            return self.lookup[x]
        except (KeyError, TypeError):
            raise UnknownElement(x)


@dataclass(frozen=True)
class Antichain:
    members: frozenset

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))


@dataclass(frozen=True)
class Interval:
    """ Contiguous run of chain positions lo..hi; lo and hi None if empty """
    chain: int
    lo: object
    hi: object
    members: tuple

    @property
    def empty(self):
        return not self.members

    def intersect(self, other):
        members = tuple(x for x in self.members if x in other.members)
        if not members:
            return Interval(self.chain, None, None, ())
        return Interval(self.chain, max(self.lo, other.lo),
                        min(self.hi, other.hi), members)


def build_poset(elements, relation_pairs=()):
    """
    Builds a poset from its elements and any generating set of its order.
    The closure is taken and the cover relation recomputed by reduction.
    """
    elements = list(elements)
    declared = set()
    for x in elements:
        if x in declared:
            raise DuplicateElement(x)
        declared.add(x)
    elements = tuple(sorted(elements))
    graph = nx.DiGraph()
    graph.add_nodes_from(elements)
    for a, b in relation_pairs:
        for x in (a, b):
            if x not in declared:
                raise UnknownElement(x)
        if a == b:
            raise CycleError([a, b])
        graph.add_edge(a, b)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for u, v in nx.find_cycle(graph)]
        raise CycleError(cycle + cycle[:1])
    # Closure by per-node reachability
    index = {x: i for i, x in enumerate(elements)}
    closure = np.zeros((len(elements), len(elements)), dtype=bool)
    for x in elements:
        for y in nx.descendants(graph, x):
            closure[index[x], index[y]] = True
    cover = nx.transitive_reduction(graph)
    logger.debug("Built poset: %d elements, %d covers, %d relations",
                 len(elements), cover.number_of_edges(), int(closure.sum()))
    return Poset(elements, cover, closure, index)


def comparable(p, a, b):
    """ Returns how a relates to b """
    i, j = p.locate(a), p.locate(b)
    if i == j:
        return Relation.EQUAL
    if p.closure[i, j]:
        return Relation.LESS
    if p.closure[j, i]:
        return Relation.GREATER
    return Relation.CONCURRENT


def is_antichain(p, members):
    """ Checks members are pairwise concurrent in p """
    members = list(members)
    return all(p.concurrent(a, b) for k, a in enumerate(members)
               for b in members[k + 1:])


def maximal_elements(p, subset=None):
    """ Returns elements of subset with nothing above them in subset """
    subset = set(p.elements if subset is None else subset)
    return {x for x in subset if not p.above(x) & subset}


def minimal_elements(p, subset=None):
    """ Returns elements of subset with nothing below them in subset """
    subset = set(p.elements if subset is None else subset)
    return {x for x in subset if not p.below(x) & subset}


def height(p):
    """ Returns the size of a longest chain of p and one such chain """
    if not p.elements:
        return 0, ()
    path = nx.dag_longest_path(p.graph)
    return len(path), tuple(path)


def _split_matching(p):
    """ Maximum matching on the bipartite split graph of the closure """
    split = nx.Graph()
    top = [('lo', x) for x in p.elements]
    split.add_nodes_from(top, bipartite=0)
    split.add_nodes_from((('hi', x) for x in p.elements), bipartite=1)
    split.add_edges_from((('lo', a), ('hi', b))
                         for a, b in p.relation_pairs())
    matching = nx.bipartite.hopcroft_karp_matching(split, top_nodes=top)
    return split, top, matching


def width(p):
    """
    Returns the width of p with a maximum antichain as witness. The
    antichain is read off the Konig vertex cover of the split matching.
    """
    if not p.elements:
        return 0, Antichain(frozenset())
    split, top, matching = _split_matching(p)
    cover = nx.bipartite.to_vertex_cover(split, matching, top_nodes=top)
    members = frozenset(x for x in p.elements
                        if ('lo', x) not in cover and ('hi', x) not in cover)
    size = len(p.elements) - len(matching) // 2
    if len(members) != size:
        raise InternalConsistencyError(
            "Antichain of size %d against a chain cover of size %d"
            % (len(members), size))
    return size, Antichain(members)


def minimum_chain_partition(p):
    """ Returns a chain partition of p with width(p) chains (Dilworth) """
    _, _, matching = _split_matching(p)
    successor = {x: matching[('lo', x)][1] for x in p.elements
                 if ('lo', x) in matching}
    has_predecessor = set(successor.values())
    # Follows matched edges upward from each unmatched start
    chains = []
    for x in p.elements:
        if x in has_predecessor:
            continue
        chain = [x]
        while chain[-1] in successor:
            chain.append(successor[chain[-1]])
        chains.append(chain)
    return ChainPartition(tuple(chains))


def make_chain_partition(p, chains):
    """ Validates chains as a chain partition of p """
    cp = ChainPartition(tuple(chains))
    listed = []
    for i, chain in enumerate(cp.chains, 1):
        if not chain:
            raise BadChainPartition("Chain %d is empty" % i, chain=i)
        for x in chain:
            p.locate(x)
        for a, b in zip(chain, chain[1:]):
            if not p.less(a, b):
                raise NotTotallyOrdered(i, (a, b))
        listed.extend(chain)
    if len(listed) != len(set(listed)):
        repeated = sorted(x for x in set(listed) if listed.count(x) > 1)
        raise BadChainPartition("Elements on more than one chain: %s"
                                % repeated, elements=repeated)
    missing = sorted(set(p.elements) - set(listed))
    if missing:
        raise BadChainPartition("Elements on no chain: %s" % missing,
                                elements=missing)
    return cp


def incomparable_interval(p, cp, s, i):
    """
    Returns the run of chain i concurrent to s. Chain i splits into a prefix
    below s, this run, and a suffix above s; the run is empty when s lies on
    chain i itself.
    """
    p.locate(s)
    chain = cp.chain(i)
    if cp.lookup.get(s, (None,))[0] == i:
        return Interval(i, None, None, ())
    lo = 0
    while lo < len(chain) and p.less(chain[lo], s):
        lo += 1
    hi = len(chain) - 1
    while hi >= lo and p.less(s, chain[hi]):
        hi -= 1
    if lo > hi:
        return Interval(i, None, None, ())
    return Interval(i, lo, hi, tuple(chain[lo:hi + 1]))


def _check_bound(p, bound):
    limit = oracle_bound(bound)
    if len(p) > limit:
        raise OracleBoundExceeded(len(p), limit)


def enumerate_antichains(p, size_filter=None, bound=None):
    """ Yields every antichain of p exactly once (brute-force oracle) """
    _check_bound(p, bound)
    order = list(nx.lexicographical_topological_sort(p.graph))
    for members in nx.antichains(p.graph, topo_order=order):
        if size_filter is None or len(members) == size_filter:
            yield Antichain(frozenset(members))


def enumerate_downsets_bruteforce(p, bound=None):
    """ Yields every downset of p, one per antichain of maximal elements """
    for antichain in enumerate_antichains(p, bound=bound):
        downset = set(antichain.members)
        for x in antichain.members:
            downset |= p.below(x)
        yield frozenset(downset)
