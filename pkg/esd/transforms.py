"""
Conversions between the two models. The ES transform turns an event model
into its state model. The SE transform rebuilds an event model from a state
model, collapsing strongly connected groups of transitions into shared
events, or explains why no event model exists.
"""
# Python packages
import logging
import networkx as nx
from collections import Counter
from dataclasses import dataclass
# Local modules
from esd.utils import dotted, shared_id
from esd.poset import build_poset
from esd.event_model import build_event_model
from esd.state_model import build_state_model
from esd.errors import ESDError, InternalConsistencyError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OffendingComponent:
    """ Strongly connected draft nodes with chains holding two or more """
    nodes: tuple
    chains: tuple

    def to_dict(self):
        return {'nodes': [dotted(i, r) for i, r in self.nodes],
                'chains': list(self.chains)}


@dataclass(frozen=True)
class InvalidityReport:
    """
    Why a state model has no event model: cyclic components of the draft
    graph, relations touching initial or final states across chains, and
    relations the rebuilt event model would force but the input lacks
    """
    components: tuple = ()
    unrepresentable: tuple = ()
    implied: tuple = ()

    def to_dict(self):
        return {'valid': False,
                'components': [c.to_dict() for c in self.components],
                'unrepresentable': [list(pair)
                                    for pair in self.unrepresentable],
                'implied': [list(pair) for pair in self.implied]}


@dataclass(frozen=True, eq=False)
class SETransformOutcome:
    model: object = None
    report: object = None
    draft: object = None

    @property
    def ok(self):
        return self.model is not None


def es_transform(m):
    """
    Returns the state model of an event model. Process i gets the states
    "i.0" .. "i.n_i", state [i,k] following its k-th event, and across
    processes [i,r] < [j,s] iff event (i,r+1) happened before, or is,
    event (j,s).
    """
    n = m.n
    chains = [[dotted(i, k) for k in range(m.length(i) + 1)]
              for i in range(1, n + 1)]
    pairs = [(a, b) for chain in chains for a, b in zip(chain, chain[1:])]
    for i in range(1, n + 1):
        for r in range(m.length(i)):
            e = m.slot(i, r + 1)
            for j in range(1, n + 1):
                if j == i:
                    continue
                # Smallest s only, the chain of j carries the rest
                for s in range(1, m.length(j) + 1):
                    f = m.slot(j, s)
                    if f == e or m.poset.less(e, f):
                        pairs.append((dotted(i, r), dotted(j, s)))
                        break
    states = [s for chain in chains for s in chain]
    sm = build_state_model(build_poset(states, pairs), chains)
    logger.debug("ES transform: %d events -> %d states",
                 len(m.events), len(states))
    return sm


def build_draft_event_graph(sm):
    """
    Returns the provisional event graph of a state model. Node (i, r) is the
    transition from [i,r-1] to [i,r]; consecutive transitions of a chain are
    linked, and (i,r) -> (j,s) whenever [i,r-1] < [j,s] on another chain.
    Only the smallest such s gets an edge, which leaves reachability intact.
    """
    draft = nx.DiGraph()
    for i in range(1, sm.n + 1):
        nodes = [(i, r) for r in range(1, sm.length(i) + 1)]
        draft.add_nodes_from(nodes, chain=i)
        draft.add_edges_from(zip(nodes, nodes[1:]))
    for i in range(1, sm.n + 1):
        for r in range(1, sm.length(i) + 1):
            before = sm.state(i, r - 1)
            for j in range(1, sm.n + 1):
                if j == i:
                    continue
                for s in range(1, sm.length(j) + 1):
                    if sm.poset.less(before, sm.state(j, s)):
                        draft.add_edge((i, r), (j, s))
                        break
    return draft


def _unrepresentable_relations(sm):
    """ Cross-chain relations ending at an initial or leaving a final state """
    pairs = []
    for a, b in sm.poset.relation_pairs():
        (i, r), (j, s) = sm.position(a), sm.position(b)
        if i != j and (s == 0 or r == sm.length(i)):
            pairs.append((a, b))
    return tuple(pairs)


def _implied_relations(sm, model):
    """ Relations the rebuilt model's state model has beyond the input """
    rebuilt = es_transform(model)
    extra = rebuilt.positional_relation() - sm.positional_relation()
    return tuple(sorted((sm.state(*a), sm.state(*b)) for a, b in extra))


def se_transform(sm):
    """
    Rebuilds the event model of a state model. Each strongly connected
    component of the draft graph becomes one event carrying the slots of its
    nodes; a component with two nodes on one chain means no event model
    exists, and is reported rather than raised.
    """
    draft = build_draft_event_graph(sm)
    components = sorted(sorted(c) for c in
                        nx.strongly_connected_components(draft))
    offending = []
    for nodes in components:
        counts = Counter(i for i, _ in nodes)
        clashes = tuple(sorted(i for i, c in counts.items() if c > 1))
        if clashes:
            offending.append(OffendingComponent(tuple(nodes), clashes))
    unrepresentable = _unrepresentable_relations(sm)
    logger.debug("Draft graph: %d nodes, %d edges, %d components",
                 draft.number_of_nodes(), draft.number_of_edges(),
                 len(components))
    if offending or unrepresentable:
        report = InvalidityReport(tuple(offending), unrepresentable)
        return SETransformOutcome(report=report, draft=draft)
    # Collapses each component into one event carrying all its slots
    event_of = {}
    labels = {}
    for nodes in components:
        eid = dotted(*nodes[0]) if len(nodes) == 1 else shared_id(nodes)
        labels[eid] = nodes
        for node in nodes:
            event_of[node] = eid
    pairs = sorted({(event_of[u], event_of[v]) for u, v in draft.edges()
                    if event_of[u] != event_of[v]})
    try:
        poset = build_poset(labels, pairs)
        model = build_event_model(poset, sm.n, labels,
                                  allow_empty_process=True)
    except ESDError as exc:
        raise InternalConsistencyError(
            "Collapsed draft graph is not an event model: %s" % exc) from exc
    implied = _implied_relations(sm, model)
    if implied:
        report = InvalidityReport(implied=implied)
        return SETransformOutcome(report=report, draft=draft)
    return SETransformOutcome(model=model, draft=draft)


def roundtrip_es_se(m):
    """ Checks SE(ES(m)) is m up to renaming of events """
    outcome = se_transform(es_transform(m))
    return outcome.ok and outcome.model.signature() == m.signature()


def roundtrip_se_es(sm):
    """ Checks ES(SE(sm)) has the chains and order of sm """
    outcome = se_transform(sm)
    if not outcome.ok:
        return False
    rebuilt = es_transform(outcome.model)
    return (rebuilt.shape() == sm.shape() and
            rebuilt.positional_relation() == sm.positional_relation())
