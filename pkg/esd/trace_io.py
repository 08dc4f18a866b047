"""
Reading and writing trace files. Every file is one JSON object with a
"kind" ("event", "state", "poset", "marks" or "predicate") and a "version";
fields are checked strictly, so a misspelt key is an error rather than a
silently ignored one. The field tables are in docs/formats.md.
"""
# Python packages
import json
import logging
from collections import defaultdict
from dataclasses import dataclass
# Local modules
from esd.config import TRACE_VERSION
from esd.utils import dotted, parse_dotted
from esd.poset import Poset, build_poset
from esd.event_model import EventModel, build_event_model
from esd.state_model import StateModel, build_state_model
from esd.analysis import CheckpointMarking
from esd.predicates import parse_predicate
from esd.errors import TraceFormatError

logger = logging.getLogger(__name__)

KINDS = ('event', 'state', 'poset', 'marks', 'predicate')
_FIELDS = {
    'event': ({'n', 'events'}, {'edges', 'allow_empty_process'}),
    'state': ({'elements', 'chains'}, {'relations', 'attrs'}),
    'poset': ({'elements'}, {'relations', 'chains'}),
    'marks': ({'marks'}, set()),
    'predicate': ({'predicate'}, set()),
}


@dataclass(frozen=True)
class Trace:
    """ A parsed trace: its kind, its model and, for posets, any chains """
    kind: str
    model: object
    chains: tuple = None


def _fail(message, **details):
    raise TraceFormatError(message, **details)


def _check_fields(data, required, optional, where):
    present = set(data)
    missing = sorted(required - present)
    unknown = sorted(present - required - optional)
    if missing:
        _fail("%s is missing %s" % (where, ', '.join(missing)),
              missing=missing)
    if unknown:
        _fail("%s has unknown fields %s" % (where, ', '.join(unknown)),
              unknown=unknown)


def _string_list(value, where):
    if not isinstance(value, list) or \
            not all(isinstance(x, str) for x in value):
        _fail("%s must be a list of strings" % where)
    return value


def _pairs(value, where):
    if not isinstance(value, list):
        _fail("%s must be a list of pairs" % where)
    for pair in value:
        if not isinstance(pair, list) or len(pair) != 2 or \
                not all(isinstance(x, str) for x in pair):
            _fail("%s entries must be [from, to] pairs of ids, got %r"
                  % (where, pair))
    return [tuple(pair) for pair in value]


def _integer(value, where):
    if not isinstance(value, int) or isinstance(value, bool):
        _fail("%s must be an integer, got %r" % (where, value))
    return value


def _parse_event(data):
    n = _integer(data['n'], 'n')
    if not isinstance(data['events'], list):
        _fail("events must be a list")
    ids, labels = [], {}
    by_process = defaultdict(lambda: defaultdict(list))
    for record in data['events']:
        if not isinstance(record, dict):
            _fail("events entries must be objects, got %r" % (record,))
        _check_fields(record, {'id', 'slots'}, set(), 'event')
        eid = record['id']
        if not isinstance(eid, str):
            _fail("event id must be a string, got %r" % (eid,))
        if not isinstance(record['slots'], list):
            _fail("slots of %s must be a list" % eid)
        slots = []
        for slot in record['slots']:
            if not isinstance(slot, dict):
                _fail("slots of %s must be objects" % eid)
            _check_fields(slot, {'proc', 'idx'}, set(), 'slot of %s' % eid)
            proc = _integer(slot['proc'], 'proc of %s' % eid)
            idx = _integer(slot['idx'], 'idx of %s' % eid)
            slots.append((proc, idx))
            by_process[proc][idx].append(eid)
        ids.append(eid)
        labels[eid] = slots
    edges = _pairs(data.get('edges', []), 'edges')
    allow_empty = data.get('allow_empty_process', False)
    if not isinstance(allow_empty, bool):
        _fail("allow_empty_process must be a boolean")
    # Consecutive indices of a process are ordered implicitly
    for groups in by_process.values():
        indices = sorted(groups)
        for lo, hi in zip(indices, indices[1:]):
            edges.extend((a, b) for a in groups[lo] for b in groups[hi])
    poset = build_poset(ids, edges)
    return Trace('event', build_event_model(poset, n, labels,
                                            allow_empty_process=allow_empty))


def _parse_chains(value):
    if not isinstance(value, list):
        _fail("chains must be a list of lists")
    return [_string_list(chain, 'chains entry') for chain in value]


def _check_state_ids(chains):
    """ State k of chain i must be named "i.k" """
    for i, chain in enumerate(chains, 1):
        for k, s in enumerate(chain):
            if parse_dotted(s) != (i, k):
                _fail("State %r is at [%d,%d] but is not named %r"
                      % (s, i, k, dotted(i, k)), state=s)


def _parse_state(data):
    elements = _string_list(data['elements'], 'elements')
    relations = _pairs(data.get('relations', []), 'relations')
    chains = _parse_chains(data['chains'])
    _check_state_ids(chains)
    # Chains order their own states
    relations.extend((a, b) for chain in chains
                     for a, b in zip(chain, chain[1:]))
    attrs = data.get('attrs', {})
    if not isinstance(attrs, dict) or \
            not all(isinstance(v, dict) for v in attrs.values()):
        _fail("attrs must map state ids to objects")
    poset = build_poset(elements, relations)
    return Trace('state', build_state_model(poset, chains, attrs))


def _parse_poset(data):
    elements = _string_list(data['elements'], 'elements')
    relations = _pairs(data.get('relations', []), 'relations')
    chains = None
    if 'chains' in data:
        chains = tuple(tuple(chain)
                       for chain in _parse_chains(data['chains']))
    return Trace('poset', build_poset(elements, relations), chains)


def _parse_marks(data):
    marks = data['marks']
    if not isinstance(marks, dict) or \
            not all(isinstance(v, list) for v in marks.values()):
        _fail("marks must map process numbers to lists of indices")
    return Trace('marks', marks)


def _parse_predicate(data):
    return Trace('predicate', parse_predicate(data['predicate']))


_PARSERS = {
    'event': _parse_event,
    'state': _parse_state,
    'poset': _parse_poset,
    'marks': _parse_marks,
    'predicate': _parse_predicate,
}


def parse(text):
    """ Parses the text of a trace file """
    try:
        data = json.loads(text)
    except ValueError as exc:
        _fail("Malformed JSON: %s" % exc)
    if not isinstance(data, dict):
        _fail("A trace file holds one JSON object")
    kind = data.get('kind')
    if kind not in KINDS:
        _fail("Unknown kind %r, expected one of %s"
              % (kind, ', '.join(KINDS)), kind=kind)
    if data.get('version') != TRACE_VERSION:
        _fail("Unsupported version %r, expected %d"
              % (data.get('version'), TRACE_VERSION))
    required, optional = _FIELDS[kind]
    _check_fields(data, required | {'kind', 'version'}, optional,
                  '%s trace' % kind)
    trace = _PARSERS[kind](data)
    logger.debug("Parsed %s trace", kind)
    return trace


def load(path):
    """ Reads and parses a trace file """
    try:
        with open(path) as fp:
            text = fp.read()
    except OSError as exc:
        _fail("Cannot read %s: %s" % (path, exc.strerror), path=str(path))
    return parse(text)


def _header(kind):
    return {'kind': kind, 'version': TRACE_VERSION}


def _consecutive(chains):
    return {(a, b) for chain in chains for a, b in zip(chain, chain[1:])}


def dump(obj, chains=None):
    """
    Returns the trace-file dict of a model. Cover pairs already implied by
    process or chain order are left out.
    """
    if isinstance(obj, EventModel):
        implied = _consecutive(obj.processes)
        record = _header('event')
        record['n'] = obj.n
        record['events'] = [
            {'id': e, 'slots': [{'proc': i, 'idx': k}
                                for i, k in obj.labels[e]]}
            for e in obj.events]
        record['edges'] = [list(pair) for pair in obj.poset.cover_pairs()
                           if pair not in implied]
        if any(not events for events in obj.processes):
            record['allow_empty_process'] = True
        return record
    if isinstance(obj, StateModel):
        implied = _consecutive(obj.chains.chains)
        record = _header('state')
        record['elements'] = list(obj.states)
        record['chains'] = [list(chain) for chain in obj.chains.chains]
        record['relations'] = [list(pair) for pair in obj.poset.cover_pairs()
                               if pair not in implied]
        if obj.attrs:
            record['attrs'] = {s: dict(a) for s, a in obj.attrs.items()}
        return record
    if isinstance(obj, Poset):
        record = _header('poset')
        record['elements'] = list(obj.elements)
        record['relations'] = [list(pair) for pair in obj.cover_pairs()]
        if chains is not None:
            record['chains'] = [list(chain) for chain in chains]
        return record
    if isinstance(obj, CheckpointMarking):
        record = _header('marks')
        record['marks'] = {str(i): list(k) for i, k in obj.marks.items()}
        return record
    if hasattr(obj, 'to_dict') and hasattr(obj, 'evaluate'):
        record = _header('predicate')
        record['predicate'] = obj.to_dict()
        return record
    raise TypeError("Cannot dump %r" % (obj,))


def canonical_json(data):
    """ Serialises with sorted keys and two-space indent """
    return json.dumps(data, sort_keys=True, indent=2)
