"""
Exception hierarchy for esd.

Every error carries a JSON-serialisable ``details`` dict so the command line
front end can print structured diagnostics, and an ``exit_code`` used as the
process exit status.
"""


class ESDError(Exception):
    """ Base class for all errors raised by esd """
    exit_code = 2

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        """ Returns the error as a diagnostics record """
        record = {'error': type(self).__name__, 'message': str(self)}
        record.update(self.details)
        return record


class CycleError(ESDError):
    def __init__(self, cycle):
        super().__init__("Relation contains a cycle: %s"
                         % ' -> '.join(map(str, cycle)),
                         cycle=list(cycle))


class UnknownElement(ESDError):
    def __init__(self, element):
        super().__init__("Unknown element %r" % (element,),
                         element=element)


class DuplicateElement(ESDError):
    def __init__(self, element):
        super().__init__("Element %r declared twice" % (element,),
                         element=element)


class BadChainIndex(ESDError):
    def __init__(self, index, n):
        super().__init__("Chain index %r outside 1..%d" % (index, n),
                         index=index, n=n)


class BadChainPartition(ESDError):
    pass


class OracleBoundExceeded(ESDError):
    def __init__(self, size, bound):
        super().__init__("Brute-force oracle limited to %d elements, got %d"
                         % (bound, size), size=size, bound=bound)


class BadLabel(ESDError):
    def __init__(self, event, reason):
        super().__init__("Bad label for event %r: %s" % (event, reason),
                         event=event, reason=reason)


class NotTotallyOrdered(ESDError):
    def __init__(self, process, pair):
        super().__init__("Chain %d is not totally ordered as listed: "
                         "%s then %s"
                         % ((process,) + tuple(pair)),
                         process=process, pair=list(pair))


class IndexGap(ESDError):
    def __init__(self, process, indices):
        super().__init__("Indices on process %d do not number its events "
                         "1..n in order: %s" % (process, list(indices)),
                         process=process, indices=list(indices))


class EmptyProcess(ESDError):
    def __init__(self, process):
        super().__init__("Process %d has no events" % process,
                         process=process)


class NotConsistent(ESDError):
    def __init__(self, event, missing):
        super().__init__("Cut is not downward closed: %r needs %r"
                         % (event, missing), event=event, missing=missing)


class NotWidthAntichain(ESDError):
    def __init__(self, states, reason):
        super().__init__("Not a width-antichain: %s" % reason,
                         states=sorted(states), reason=reason)


class NotWidthExtensible(ESDError):
    def __init__(self, witness):
        super().__init__("Poset is not width-extensible; %s extends to no "
                         "width-antichain" % (list(witness),),
                         witness=list(witness))


class InvalidStateModel(ESDError):
    """ Raised when a caller needs an event model the SE transform refused """

    def __init__(self, report):
        super().__init__("State model has no event model counterpart",
                         report=report.to_dict())
        self.report = report


class BadMarking(ESDError):
    pass


class BadPredicate(ESDError):
    pass


class InternalConsistencyError(ESDError):
    pass


class TraceFormatError(ESDError):
    exit_code = 3


class KindMismatch(ESDError):
    exit_code = 4

    def __init__(self, kind, expected):
        super().__init__("Trace kind %r cannot be used here (expected %s)"
                         % (kind, ' or '.join(expected)),
                         kind=kind, expected=list(expected))


class UsageError(ESDError):
    exit_code = 4


class ConfigError(ESDError):
    exit_code = 4


class CutLimitExceeded(ESDError):
    exit_code = 5

    def __init__(self, limit):
        super().__init__("More than %d cuts; raise --max-cuts to continue"
                         % limit, limit=limit)
