"""
A small closed language of width-predicates: per-process clauses on the
state each process is in, numeric aggregates over all processes, and the
boolean connectives. Predicates are evaluated on a CutView, which exposes
one width-antichain of a state model.

JSON form, one object per node keyed by "op":

    {"op": "const", "value": true}
    {"op": "at_least", "proc": 1, "index": 2}
    {"op": "compare", "proc": 1, "attr": "phase", "cmp": "==", "value": "b"}
    {"op": "aggregate", "func": "sum", "attr": "permits", "cmp": "<",
     "value": 3}
    {"op": "and", "args": [...]}, {"op": "or", "args": [...]}
    {"op": "not", "arg": {...}}
"""
# Python packages
import logging
import operator
from dataclasses import dataclass
# Local modules
from esd.errors import BadPredicate

logger = logging.getLogger(__name__)

COMPARISONS = {
    '==': operator.eq,
    '!=': operator.ne,
    '<': operator.lt,
    '<=': operator.le,
    '>': operator.gt,
    '>=': operator.ge,
}
AGGREGATES = ('sum', 'count')


class CutView:
    """ Read access to the state each process is in at one width-antichain """

    def __init__(self, sm, cut):
        self.model = sm
        self.cut = cut
        states = getattr(cut, 'states', cut)
        self.chosen = {sm.position(s)[0]: s for s in states}

    def state(self, i):
        return self.chosen[i]

    def index(self, i):
        return self.model.position(self.chosen[i])[1]

    def attrs(self, i):
        return self.model.attrs.get(self.chosen[i], {})

    def processes(self):
        return sorted(self.chosen)


def _compare(cmp, left, right, where):
    try:
        return COMPARISONS[cmp](left, right)
    except TypeError:
        logger.warning("Cannot compare %r %s %r at %s", left, cmp, right,
                       where)
        return False


@dataclass(frozen=True)
class Constant:
    value: bool

    def evaluate(self, view):
        return self.value

    def to_dict(self):
        return {'op': 'const', 'value': self.value}


@dataclass(frozen=True)
class AtLeast:
    """ Process proc is at state index or later """
    proc: int
    index: int

    def evaluate(self, view):
        return view.index(self.proc) >= self.index

    def to_dict(self):
        return {'op': 'at_least', 'proc': self.proc, 'index': self.index}


@dataclass(frozen=True)
class Compare:
    proc: int
    attr: str
    cmp: str
    value: object

    def evaluate(self, view):
        attrs = view.attrs(self.proc)
        if self.attr not in attrs:
            logger.warning("State %s has no attribute %r; clause is false",
                           view.state(self.proc), self.attr)
            return False
        return _compare(self.cmp, attrs[self.attr], self.value,
                        view.state(self.proc))

    def to_dict(self):
        return {'op': 'compare', 'proc': self.proc, 'attr': self.attr,
                'cmp': self.cmp, 'value': self.value}


@dataclass(frozen=True)
class Aggregate:
    """ Sum of a numeric attribute, or count of states where it is truthy """
    func: str
    attr: str
    cmp: str
    value: object

    def evaluate(self, view):
        values = []
        for i in view.processes():
            attrs = view.attrs(i)
            if self.attr in attrs:
                values.append(attrs[self.attr])
            elif self.func == 'sum':
                logger.warning("State %s has no attribute %r; clause is "
                               "false", view.state(i), self.attr)
                return False
        if self.func == 'count':
            total = sum(1 for v in values if v)
        else:
            try:
                total = sum(values)
            except TypeError:
                logger.warning("Attribute %r is not numeric", self.attr)
                return False
        return _compare(self.cmp, total, self.value, self.func)

    def to_dict(self):
        return {'op': 'aggregate', 'func': self.func, 'attr': self.attr,
                'cmp': self.cmp, 'value': self.value}


@dataclass(frozen=True)
class And:
    args: tuple

    def evaluate(self, view):
        return all(arg.evaluate(view) for arg in self.args)

    def to_dict(self):
        return {'op': 'and', 'args': [arg.to_dict() for arg in self.args]}


@dataclass(frozen=True)
class Or:
    args: tuple

    def evaluate(self, view):
        return any(arg.evaluate(view) for arg in self.args)

    def to_dict(self):
        return {'op': 'or', 'args': [arg.to_dict() for arg in self.args]}


@dataclass(frozen=True)
class Not:
    arg: object

    def evaluate(self, view):
        return not self.arg.evaluate(view)

    def to_dict(self):
        return {'op': 'not', 'arg': self.arg.to_dict()}


_FIELDS = {
    'const': {'value'},
    'at_least': {'proc', 'index'},
    'compare': {'proc', 'attr', 'cmp', 'value'},
    'aggregate': {'func', 'attr', 'cmp', 'value'},
    'and': {'args'},
    'or': {'args'},
    'not': {'arg'},
}


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def parse_predicate(data):
    """ Builds a predicate from its JSON form """
    if not isinstance(data, dict) or data.get('op') not in _FIELDS:
        raise BadPredicate("Predicate node needs an 'op' among %s, got %r"
                           % (sorted(_FIELDS), data), node=repr(data))
    op = data['op']
    fields = set(data) - {'op'}
    if fields != _FIELDS[op]:
        raise BadPredicate("Node %r takes fields %s, got %s"
                           % (op, sorted(_FIELDS[op]), sorted(fields)),
                           node=op)
    if op == 'const':
        if not isinstance(data['value'], bool):
            raise BadPredicate("const takes a boolean", node=op)
        return Constant(data['value'])
    if op in ('and', 'or'):
        if not isinstance(data['args'], list):
            raise BadPredicate("%s takes a list of args" % op, node=op)
        args = tuple(parse_predicate(arg) for arg in data['args'])
        return And(args) if op == 'and' else Or(args)
    if op == 'not':
        return Not(parse_predicate(data['arg']))
    if op == 'at_least':
        if not _is_int(data['proc']) or not _is_int(data['index']):
            raise BadPredicate("at_least takes integer proc and index",
                               node=op)
        return AtLeast(data['proc'], data['index'])
    if data['cmp'] not in COMPARISONS:
        raise BadPredicate("Unknown comparison %r" % data['cmp'], node=op)
    if op == 'compare':
        if not _is_int(data['proc']):
            raise BadPredicate("compare takes an integer proc", node=op)
        return Compare(data['proc'], data['attr'], data['cmp'],
                       data['value'])
    if data['func'] not in AGGREGATES:
        raise BadPredicate("Unknown aggregate %r" % data['func'], node=op)
    return Aggregate(data['func'], data['attr'], data['cmp'], data['value'])


def check_predicate(predicate, n):
    """ Raises BadPredicate if a clause names a process outside 1..n """
    if isinstance(predicate, (AtLeast, Compare)):
        if not 1 <= predicate.proc <= n:
            raise BadPredicate("Clause names process %d of %d"
                               % (predicate.proc, n), proc=predicate.proc)
    elif isinstance(predicate, (And, Or)):
        for arg in predicate.args:
            check_predicate(arg, n)
    elif isinstance(predicate, Not):
        check_predicate(predicate.arg, n)


def as_callable(predicate, sm):
    """ Returns a function of a width-antichain evaluating predicate on sm """
    if hasattr(predicate, 'evaluate'):
        check_predicate(predicate, sm.n)
        return lambda cut: bool(predicate.evaluate(CutView(sm, cut)))
    if callable(predicate):
        return lambda cut: bool(predicate(CutView(sm, cut)))
    raise BadPredicate("Not a predicate: %r" % (predicate,))
