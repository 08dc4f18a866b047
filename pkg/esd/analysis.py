"""
Analyses over state models: detection of width-predicates on the lattice
of width-antichains, and useless-checkpoint analysis of a checkpoint
marking.
"""
# Python packages
import logging
import networkx as nx
from collections import deque
from dataclasses import dataclass
# Local modules
from esd.poset import width, enumerate_antichains
from esd.state_model import (
    Verdict,
    build_state_model,
    check_omega1,
    check_omega2,
)
from esd.transforms import build_draft_event_graph
from esd.lattice import (
    enumerate_width_antichains,
    build_width_antichain_lattice,
)
from esd.predicates import as_callable
from esd.errors import BadMarking, BadPredicate, UsageError

logger = logging.getLogger(__name__)

ENGINES = ('fast', 'oracle', 'both')


def _predicate_on(sm, B):
    w, _ = width(sm.poset)
    if sm.n != w:
        raise BadPredicate("Width-predicates need one state per process; "
                           "model has %d processes but width %d"
                           % (sm.n, w), n=sm.n, width=w)
    return as_callable(B, sm)


def detect_width_predicate(sm, B, verbose=False):
    """ Yields the width-antichains of sm on which B holds """
    holds = _predicate_on(sm, B)
    for cut in enumerate_width_antichains(sm, verbose=verbose):
        if holds(cut):
            yield cut


def first_width_predicate_cut(sm, B):
    """ Returns the first satisfying width-antichain in lexical order """
    return next(detect_width_predicate(sm, B), None)


def count_width_predicate_cuts(sm, B, verbose=False):
    return sum(1 for _ in detect_width_predicate(sm, B, verbose=verbose))


def definitely_width_predicate(sm, B):
    """
    Decides whether every path of one-step moves from the bottom to the top
    of the width-antichain lattice passes a cut satisfying B. The witness
    of a false verdict is one path that avoids B throughout.
    """
    holds = _predicate_on(sm, B)
    lattice = build_width_antichain_lattice(sm)
    name = 'definitely'
    if holds(lattice.bottom):
        return Verdict(name, True, method='lattice')
    # Breadth-first over cuts where B fails
    parent = {0: None}
    queue = deque([0])
    last = len(lattice) - 1
    while queue:
        k = queue.popleft()
        if k == last:
            path = []
            while k is not None:
                path.append(sorted(lattice.cuts[k].states))
                k = parent[k]
            return Verdict(name, False, tuple(reversed(path)), 'lattice')
        for step in lattice.successors[k]:
            if step not in parent and not holds(lattice.cuts[step]):
                parent[step] = k
                queue.append(step)
    return Verdict(name, True, method='lattice')


@dataclass(frozen=True)
class CheckpointMarking:
    """ Checkpointed state indices per process, endpoints included """
    marks: dict

    def states(self, sm):
        return [sm.state(i, k) for i in sorted(self.marks)
                for k in self.marks[i]]


def build_checkpoint_marking(sm, marks):
    """ Validates a marking of sm; keys may be process numbers or strings """
    parsed = {}
    for key, indices in dict(marks).items():
        try:
            i = int(key)
        except (TypeError, ValueError):
            raise BadMarking("Bad process key %r" % (key,), process=key)
        if not 1 <= i <= sm.n:
            raise BadMarking("Process %d outside 1..%d" % (i, sm.n),
                             process=i)
        if i in parsed:
            raise BadMarking("Process %d marked twice" % i, process=i)
        indices = list(indices)
        last = sm.length(i)
        for k in indices:
            if not isinstance(k, int) or isinstance(k, bool) or \
                    not 0 <= k <= last:
                raise BadMarking("Process %d has no state %r" % (i, k),
                                 process=i, index=k)
        if any(a >= b for a, b in zip(indices, indices[1:])):
            raise BadMarking("Indices of process %d are not strictly "
                             "increasing" % i, process=i)
        if not indices or indices[0] != 0 or indices[-1] != last:
            raise BadMarking("Process %d must checkpoint states 0 and %d"
                             % (i, last), process=i)
        parsed[i] = tuple(indices)
    missing = [i for i in range(1, sm.n + 1) if i not in parsed]
    if missing:
        raise BadMarking("No checkpoints for processes %s" % missing,
                         processes=missing)
    return CheckpointMarking(parsed)


def induced_checkpoint_model(sm, marks):
    """
    Restricts sm to its checkpointed states. State ids are kept; positions
    along each chain are renumbered from 0.
    """
    if not isinstance(marks, CheckpointMarking):
        marks = build_checkpoint_marking(sm, marks)
    chains = [[sm.state(i, k) for k in marks.marks[i]]
              for i in range(1, sm.n + 1)]
    kept = marks.states(sm)
    attrs = {s: sm.attrs[s] for s in kept if s in sm.attrs}
    return build_state_model(sm.poset.restrict(kept), chains, attrs)


@dataclass(frozen=True)
class CheckpointReport:
    """ Per-checkpoint usefulness with a global checkpoint for useful ones """
    induced: object
    verdicts: dict
    witnesses: dict
    method: str
    oracle: dict = None
    agree: bool = None

    @property
    def useless(self):
        return sorted(s for s, useful in self.verdicts.items()
                      if not useful)

    def to_dict(self):
        record = {
            'method': self.method,
            'useless': self.useless,
            'checkpoints': {
                s: {'useful': useful,
                    'witness': list(self.witnesses.get(s, ()))}
                for s, useful in self.verdicts.items()},
        }
        if self.oracle is not None:
            record['oracle'] = dict(self.oracle)
            record['agree'] = self.agree
        return record


def _fast_verdicts(induced):
    """
    Reads usefulness off the draft event graph of the induced model. Its
    width-antichains are the predecessor-closed node sets of the draft
    graph, so [i,k] is useless iff (i,k) and (i,k+1) are strongly connected.
    A useful checkpoint's witness closes its own node under predecessors.
    """
    if not (check_omega1(induced) and check_omega2(induced)):
        logger.warning("Induced checkpoint model has ordered initial or "
                       "final states; falling back to the oracle")
        return None
    draft = build_draft_event_graph(induced)
    component = {}
    for k, nodes in enumerate(nx.strongly_connected_components(draft)):
        for node in nodes:
            component[node] = k
    verdicts, witnesses = {}, {}
    for i in range(1, induced.n + 1):
        last = induced.length(i)
        for k in range(last + 1):
            s = induced.state(i, k)
            if 0 < k < last and component[i, k] == component[i, k + 1]:
                verdicts[s] = False
                continue
            closed = set()
            if k > 0:
                closed = nx.ancestors(draft, (i, k)) | {(i, k)}
            frontier = {j: 0 for j in range(1, induced.n + 1)}
            for j, r in closed:
                frontier[j] = max(frontier[j], r)
            verdicts[s] = True
            witnesses[s] = tuple(sorted(induced.state(j, r)
                                        for j, r in frontier.items()))
    return verdicts, witnesses


def _oracle_verdicts(induced, bound=None):
    """ Usefulness by listing every antichain with one state per process """
    witnesses = {}
    for antichain in enumerate_antichains(induced.poset,
                                          size_filter=induced.n,
                                          bound=bound):
        for s in antichain.members:
            witnesses.setdefault(s, tuple(sorted(antichain.members)))
    verdicts = {s: s in witnesses for s in induced.states}
    return verdicts, witnesses


def find_useless_checkpoints(sm, marks, engine='fast', bound=None):
    """
    Finds the checkpoints that belong to no global checkpoint, i.e. to no
    antichain of the induced model holding one checkpoint per process.
    The 'both' engine runs fast and oracle side by side and records
    whether they agree.
    """
    if engine not in ENGINES:
        raise UsageError("Unknown engine %r, expected one of %s"
                         % (engine, ', '.join(ENGINES)))
    induced = induced_checkpoint_model(sm, marks)
    fast = None if engine == 'oracle' else _fast_verdicts(induced)
    if fast is None:
        verdicts, witnesses = _oracle_verdicts(induced, bound)
        method = 'oracle'
    else:
        verdicts, witnesses = fast
        method = 'cycle'
    report = CheckpointReport(induced, verdicts, witnesses, method)
    if engine == 'both':
        oracle, _ = _oracle_verdicts(induced, bound)
        agree = oracle == verdicts
        if not agree:
            logger.error("Checkpoint engines disagree on %s", sorted(
                s for s in oracle if oracle[s] != verdicts[s]))
        report = CheckpointReport(induced, verdicts, witnesses, method,
                                  oracle, agree)
    logger.debug("%d of %d checkpoints useless", len(report.useless),
                 len(verdicts))
    return report
