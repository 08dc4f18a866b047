"""
The state-based model: local states under existed-before, partitioned into
per-process chains [i,0] < [i,1] < ... < [i,n_i], together with the property
checks that decide when such a model comes from a real computation.
"""
# Python packages
import logging
import itertools as it
import networkx as nx
from enum import Enum
from dataclasses import dataclass
# Local modules
from esd.utils import dotted
from esd.poset import (
    width,
    is_antichain,
    enumerate_antichains,
    incomparable_interval,
    make_chain_partition,
    minimum_chain_partition,
)
from esd.errors import (
    UsageError,
    UnknownElement,
    NotWidthAntichain,
    InternalConsistencyError,
)

logger = logging.getLogger(__name__)

PROPERTY_NAMES = ('omega1', 'omega2', 'omega3', 'psi',
                  'width_extensible', 'interleaving_consistent')
PROPERTY_ALIASES = {'we': 'width_extensible', 'ic': 'interleaving_consistent'}


class CutRelation(Enum):
    LESS = 'less'
    GREATER = 'greater'
    EQUAL = 'equal'
    INCOMPARABLE = 'incomparable'


@dataclass(frozen=True, eq=False)
class StateModel:
    """ States under existed-before with chain i listing [i,0] .. [i,n_i] """
    poset: object
    chains: object
    attrs: dict

    @property
    def n(self):
        return self.chains.n

    @property
    def states(self):
        return self.poset.elements

    def state(self, i, k):
        """ Returns state [i,k] """
        chain = self.chains.chain(i)
        if not isinstance(k, int) or not 0 <= k < len(chain):
            raise UnknownElement(dotted(i, k))
        return chain[k]

    def position(self, s):
        """ Returns (i, k) such that s is [i,k] """
        return self.chains.locate(s)

    def length(self, i):
        """ Returns n_i, the index of the final state of chain i """
        return len(self.chains.chain(i)) - 1

    def initial(self, i):
        return self.state(i, 0)

    def final(self, i):
        return self.state(i, self.length(i))

    def shape(self):
        return tuple(self.length(i) for i in range(1, self.n + 1))

    def positional_relation(self):
        """ Returns the order as pairs of (i, k) positions """
        return frozenset((self.position(a), self.position(b))
                         for a, b in self.poset.relation_pairs())


@dataclass(frozen=True)
class WidthAntichainCut:
    """ One state per chain, pairwise concurrent """
    states: frozenset

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(sorted(self.states))


@dataclass(frozen=True)
class Verdict:
    """ Outcome of a property check, truthy iff the property holds """
    name: str
    holds: bool
    witness: tuple = None
    method: str = 'definition'

    def __bool__(self):
        return self.holds

    def to_dict(self):
        record = {'holds': self.holds, 'method': self.method}
        if self.witness is not None:
            record['witness'] = list(self.witness)
        return record


@dataclass(frozen=True)
class PropertyReport:
    verdicts: dict

    def __getitem__(self, name):
        return self.verdicts[PROPERTY_ALIASES.get(name, name)]

    def to_dict(self):
        return {name: verdict.to_dict()
                for name, verdict in self.verdicts.items()}


def build_state_model(poset, chains, attrs=None):
    """ Validates chains as the process chains of a state model """
    chains = getattr(chains, 'chains', chains)
    cp = make_chain_partition(poset, chains)
    attrs = dict(attrs or {})
    for s in attrs:
        poset.locate(s)
    return StateModel(poset, cp, attrs)


def state_model_from_partition(p):
    """ Reads a bare poset as a state model over a minimum chain partition """
    return build_state_model(p, minimum_chain_partition(p))


def _as_poset(p):
    return p.poset if isinstance(p, StateModel) else p


def check_omega1(sm):
    """ Checks all initial states are pairwise concurrent """
    initials = [sm.initial(i) for i in range(1, sm.n + 1)]
    for a, b in it.combinations(initials, 2):
        if not sm.poset.concurrent(a, b):
            return Verdict('omega1', False, _ordered(sm, a, b))
    return Verdict('omega1', True)


def check_omega2(sm):
    """ Checks all final states are pairwise concurrent """
    finals = [sm.final(i) for i in range(1, sm.n + 1)]
    for a, b in it.combinations(finals, 2):
        if not sm.poset.concurrent(a, b):
            return Verdict('omega2', False, _ordered(sm, a, b))
    return Verdict('omega2', True)


def _ordered(sm, a, b):
    return (b, a) if sm.poset.less(b, a) else (a, b)


def check_omega3(sm):
    """
    Checks that [i,s] < [j,t] and [j,t-1] < [k,u] imply [i,s] < [k,u]
    whenever i != j and j != k. Witness is ([i,s], [j,t], [k,u]).
    """
    p = sm.poset
    for j in range(1, sm.n + 1):
        for t in range(1, sm.length(j) + 1):
            target, previous = sm.state(j, t), sm.state(j, t - 1)
            sources = sorted(x for x in p.below(target)
                             if sm.position(x)[0] != j)
            sinks = sorted(y for y in p.above(previous)
                           if sm.position(y)[0] != j)
            for x in sources:
                for y in sinks:
                    if not p.less(x, y):
                        return Verdict('omega3', False, (x, target, y))
    return Verdict('omega3', True)


def check_psi(sm):
    """
    Checks no two chains cross: never [i,s-1] < [j,t] together with
    [j,t-1] < [i,s]. Witness is ([i,s-1], [j,t], [j,t-1], [i,s]).
    """
    p = sm.poset
    for i, j in it.permutations(range(1, sm.n + 1), 2):
        for s in range(1, sm.length(i) + 1):
            before_i, at_i = sm.state(i, s - 1), sm.state(i, s)
            for t in range(1, sm.length(j) + 1):
                before_j, at_j = sm.state(j, t - 1), sm.state(j, t)
                if p.less(before_i, at_j) and p.less(before_j, at_i):
                    return Verdict('psi', False,
                                   (before_i, at_j, before_j, at_i))
    return Verdict('psi', True)


def check_width_extensible(p, debug=False):
    """
    Checks every antichain extends to a width-antichain. It suffices to
    check antichains of size one and two: each singleton must meet every
    other chain of a minimum partition, and each concurrent pair must have
    overlapping runs on every chain holding neither.
    """
    p = _as_poset(p)
    if not p.elements:
        return Verdict('width_extensible', True, method='interval')
    cp = minimum_chain_partition(p)
    # Scans from the top of a linear extension downward
    order = list(nx.lexicographical_topological_sort(p.graph))[::-1]
    runs = {}
    for s in order:
        own = cp.locate(s)[0]
        for i in range(1, cp.n + 1):
            if i == own:
                continue
            run = incomparable_interval(p, cp, s, i)
            if run.empty:
                return Verdict('width_extensible', False, (s,), 'interval')
            runs[s, i] = run
    for k, a in enumerate(order):
        for b in order[k + 1:]:
            if not p.concurrent(a, b):
                continue
            skip = (cp.locate(a)[0], cp.locate(b)[0])
            for i in range(1, cp.n + 1):
                if i in skip:
                    continue
                run_a, run_b = runs[a, i], runs[b, i]
                if run_a.intersect(run_b).empty:
                    return Verdict('width_extensible', False,
                                   tuple(sorted((a, b))), 'interval')
    if debug:
        for s in order:
            if extend_to_width_antichain(p, [s], cp) is None:
                raise InternalConsistencyError(
                    "%r passed the interval check but does not extend" % s)
        logger.debug("Every singleton extension re-validated")
    return Verdict('width_extensible', True, method='interval')


def extend_to_width_antichain(p, antichain, cp=None):
    """
    Extends an antichain chain by chain with the lowest element concurrent
    to everything chosen so far. Exact on width-extensible posets; returns
    None when some chain offers no candidate.
    """
    p = _as_poset(p)
    cp = cp or minimum_chain_partition(p)
    chosen = sorted(antichain)
    if not is_antichain(p, chosen):
        raise NotWidthAntichain(chosen, 'members are not pairwise concurrent')
    used = {cp.locate(x)[0] for x in chosen}
    for i in range(1, cp.n + 1):
        if i in used:
            continue
        candidates = [x for x in cp.chain(i)
                      if all(p.concurrent(x, y) for y in chosen)]
        if not candidates:
            return None
        chosen.append(candidates[0])
    return WidthAntichainCut(frozenset(chosen))


def width_members(p, cut):
    """ Returns the members of a width-antichain of p, validating them """
    p = _as_poset(p)
    members = frozenset(getattr(cut, 'states', getattr(cut, 'members', cut)))
    for x in members:
        if x not in p:
            raise NotWidthAntichain(members, 'unknown element %r' % (x,))
    w, _ = width(p)
    if len(members) != w:
        raise NotWidthAntichain(members, 'size %d, width is %d'
                                % (len(members), w))
    if not is_antichain(p, members):
        raise NotWidthAntichain(members, 'members are not pairwise concurrent')
    return members


def compare_width_antichains(p, A, B):
    """ Compares width-antichains: A <= B iff each a is below some b """
    p = _as_poset(p)
    A, B = width_members(p, A), width_members(p, B)
    if A == B:
        return CutRelation.EQUAL
    if _at_most(p, A, B):
        return CutRelation.LESS
    if _at_most(p, B, A):
        return CutRelation.GREATER
    return CutRelation.INCOMPARABLE


def _at_most(p, A, B):
    return all(any(a == b or p.less(a, b) for b in B) for a in A)


def _join(p, cp, A, B):
    """ Per-chain maximum of two width-antichains """
    chosen = {}
    for x in it.chain(A, B):
        i, k = cp.locate(x)
        if i not in chosen or cp.locate(chosen[i])[1] < k:
            chosen[i] = x
    return frozenset(chosen.values())


def biggest_width_antichain(p, family=None, bound=None):
    """ Returns the top of the width-antichain lattice """
    p = _as_poset(p)
    cp = minimum_chain_partition(p)
    if family is None:
        family = _width_antichain_family(p, bound)
    top = frozenset()
    for cut in family:
        top = _join(p, cp, top, getattr(cut, 'states', cut))
    return WidthAntichainCut(top)


def _width_antichain_family(p, bound=None):
    if check_width_extensible(p):
        from esd.lattice import enumerate_width_antichains
        return list(enumerate_width_antichains(p))
    w, _ = width(p)
    return [WidthAntichainCut(a.members)
            for a in enumerate_antichains(p, size_filter=w, bound=bound)]


def _has_successor(p, cp, members):
    """
    Checks some width-antichain lies one step above members: one element
    replaced by a later element of its chain concurrent with the rest
    """
    for x in members:
        i, k = cp.locate(x)
        rest = [y for y in members if y != x]
        for later in cp.chain(i)[k + 1:]:
            if all(p.concurrent(later, y) for y in rest):
                return True
    return False


def check_interleaving_consistent(p, bound=None):
    """
    Checks every width-antichain other than the top has a successor that
    differs from it in exactly one element. Width-extensible posets are
    decided by psi on a minimum chain partition; all others by searching
    the brute-force family of width-antichains.
    """
    p = _as_poset(p)
    name = 'interleaving_consistent'
    if not p.elements:
        return Verdict(name, True, method='psi')
    cp = minimum_chain_partition(p)
    if check_width_extensible(p):
        if check_psi(build_state_model(p, cp)):
            return Verdict(name, True, method='psi')
        method = 'psi'
    else:
        method = 'enumeration'
    family = _width_antichain_family(p, bound)
    top = biggest_width_antichain(p, family).states
    for cut in sorted(family, key=lambda c: sorted(c.states)):
        if cut.states != top and not _has_successor(p, cp, cut.states):
            return Verdict(name, False, tuple(sorted(cut.states)), method)
    if method == 'psi':
        raise InternalConsistencyError(
            "psi fails but every width-antichain has a successor")
    return Verdict(name, True, method=method)


def check_properties(sm, names=PROPERTY_NAMES, bound=None):
    """ Runs the named checks and collects their verdicts """
    checks = {
        'omega1': check_omega1,
        'omega2': check_omega2,
        'omega3': check_omega3,
        'psi': check_psi,
        'width_extensible': lambda m: check_width_extensible(m.poset),
        'interleaving_consistent':
            lambda m: check_interleaving_consistent(m.poset, bound=bound),
    }
    verdicts = {}
    for name in names:
        name = PROPERTY_ALIASES.get(name, name)
        if name not in checks:
            raise UsageError("Unknown property %r" % name)
        verdicts[name] = checks[name](sm)
    return PropertyReport(verdicts)
