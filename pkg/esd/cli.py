"""
Command line front end.

Exit status: 0 success, 2 semantic error (invalid model, failed
transform), 3 unreadable or malformed trace, 4 usage error or unsuitable
trace kind, 5 cut limit exceeded. Errors are written to stderr as JSON.
"""
# Python packages
import sys
import json
import logging
import argparse
import coloredlogs
# Local modules
from esd import trace_io
from esd.config import DEFAULT_MAX_CUTS, oracle_bound
from esd.poset import make_chain_partition
from esd.event_model import event_model_from_partition
from esd.state_model import (
    PROPERTY_NAMES,
    PROPERTY_ALIASES,
    build_state_model,
    check_properties,
    state_model_from_partition,
)
from esd.transforms import es_transform, se_transform
from esd.lattice import enumerate_event_cuts, enumerate_width_antichains
from esd.analysis import (
    ENGINES,
    detect_width_predicate,
    first_width_predicate_cut,
    count_width_predicate_cuts,
    definitely_width_predicate,
    find_useless_checkpoints,
)
from esd.errors import ESDError, KindMismatch, UsageError, CutLimitExceeded

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'
_HANDLERS = []


class ArgumentParser(argparse.ArgumentParser):
    """ Raises UsageError instead of exiting on bad arguments """

    def error(self, message):
        raise UsageError(message)


def _emit(stream, data):
    stream.write(trace_io.canonical_json(data) + '\n')


def _emit_line(stream, data):
    stream.write(json.dumps(data, sort_keys=True) + '\n')
    stream.flush()


def _event_model(trace):
    if trace.kind == 'event':
        return trace.model
    if trace.kind == 'poset':
        return event_model_from_partition(trace.model)
    raise KindMismatch(trace.kind, ('event', 'poset'))


def _state_model(trace, events=False):
    if trace.kind == 'state':
        return trace.model
    if trace.kind == 'poset':
        if trace.chains is not None:
            return build_state_model(trace.model, trace.chains)
        return state_model_from_partition(trace.model)
    if events and trace.kind == 'event':
        return es_transform(trace.model)
    expected = ('state', 'poset', 'event') if events else ('state', 'poset')
    raise KindMismatch(trace.kind, expected)


def _load(path, *kinds):
    trace = trace_io.load(path)
    if kinds and trace.kind not in kinds:
        raise KindMismatch(trace.kind, kinds)
    return trace


def cmd_validate(args, out):
    trace = _load(args.path)
    if trace.kind == 'poset' and trace.chains is not None:
        make_chain_partition(trace.model, trace.chains)
    _emit(out, {'valid': True, 'kind': trace.kind})
    return 0


def cmd_transform(args, out):
    trace = _load(args.path)
    if args.direction == 'es':
        if trace.kind != 'event':
            raise KindMismatch(trace.kind, ('event',))
        _emit(out, trace_io.dump(es_transform(trace.model)))
        return 0
    outcome = se_transform(_state_model(trace))
    if not outcome.ok:
        logger.error("State model has no event model counterpart")
        _emit(out, outcome.report.to_dict())
        return 2
    _emit(out, trace_io.dump(outcome.model))
    return 0


def cmd_check(args, out):
    sm = _state_model(_load(args.path))
    names = [name.strip() for name in args.properties.split(',')
             if name.strip()]
    report = check_properties(sm, names, bound=args.oracle_bound)
    _emit(out, report.to_dict())
    return 0


def _stream_cuts(cuts, out, limit):
    count = 0
    for members in cuts:
        if count == limit:
            raise CutLimitExceeded(limit)
        _emit_line(out, {'cut': sorted(members)})
        count += 1
    _emit_line(out, {'count': count})
    return 0


def cmd_cuts(args, out):
    trace = _load(args.path)
    if args.family == 'downsets':
        cuts = (cut.events for cut in enumerate_event_cuts(
            _event_model(trace), verbose=args.verbose))
    else:
        cuts = (cut.states for cut in enumerate_width_antichains(
            _state_model(trace), verbose=args.verbose))
    return _stream_cuts(cuts, out, args.max_cuts)


def cmd_predicate(args, out):
    sm = _state_model(_load(args.model), events=True)
    predicate = _load(args.pred, 'predicate').model
    if args.first:
        cut = first_width_predicate_cut(sm, predicate)
        _emit(out, {'first': None if cut is None else sorted(cut.states)})
    elif args.count:
        _emit(out, {'count': count_width_predicate_cuts(sm, predicate)})
    elif args.definitely:
        _emit(out, definitely_width_predicate(sm, predicate).to_dict())
    else:
        cuts = (cut.states for cut in detect_width_predicate(sm, predicate))
        return _stream_cuts(cuts, out, args.max_cuts)
    return 0


def cmd_checkpoints(args, out):
    sm = _state_model(_load(args.model), events=True)
    marks = _load(args.marks, 'marks').model
    report = find_useless_checkpoints(sm, marks, engine=args.engine,
                                      bound=args.oracle_bound)
    _emit(out, report.to_dict())
    return 0


def build_parser():
    parser = ArgumentParser(
        prog='esd',
        description="Event and state models of concurrent computations")
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('--oracle-bound', type=int, default=None,
                        help="Element limit for brute-force checks")
    commands = parser.add_subparsers(dest='command', required=True)

    validate = commands.add_parser('validate', help="Validate a trace")
    validate.add_argument('path')
    validate.set_defaults(run=cmd_validate)

    transform = commands.add_parser('transform',
                                    help="Convert between the two models")
    transform.add_argument('path')
    transform.add_argument('--direction', choices=['es', 'se'],
                           required=True)
    transform.set_defaults(run=cmd_transform)

    check = commands.add_parser('check', help="Check state model properties")
    check.add_argument('path')
    check.add_argument('--properties', default=','.join(PROPERTY_NAMES),
                       help="Comma separated subset of %s" % ', '.join(
                           PROPERTY_NAMES + tuple(PROPERTY_ALIASES)))
    check.set_defaults(run=cmd_check)

    cuts = commands.add_parser('cuts', help="Stream consistent cuts")
    cuts.add_argument('path')
    cuts.add_argument('--family', choices=['downsets', 'antichains'],
                      required=True)
    cuts.add_argument('--max-cuts', type=int, default=DEFAULT_MAX_CUTS)
    cuts.add_argument('--verbose', action='store_true')
    cuts.set_defaults(run=cmd_cuts)

    analyze = commands.add_parser('analyze', help="Run an analysis")
    analyses = analyze.add_subparsers(dest='analysis', required=True)

    predicate = analyses.add_parser('predicate',
                                    help="Detect a width-predicate")
    predicate.add_argument('--model', required=True)
    predicate.add_argument('--pred', required=True)
    predicate.add_argument('--max-cuts', type=int, default=DEFAULT_MAX_CUTS)
    mode = predicate.add_mutually_exclusive_group()
    mode.add_argument('--first', action='store_true')
    mode.add_argument('--count', action='store_true')
    mode.add_argument('--definitely', action='store_true')
    predicate.set_defaults(run=cmd_predicate)

    checkpoints = analyses.add_parser('checkpoints',
                                      help="Find useless checkpoints")
    checkpoints.add_argument('--model', required=True)
    checkpoints.add_argument('--marks', required=True)
    checkpoints.add_argument('--engine', choices=ENGINES, default='fast')
    checkpoints.set_defaults(run=cmd_checkpoints)
    return parser


def configure_logging(level, stream):
    """ Sends esd logs to stream, replacing the handler of an earlier call """
    package = logging.getLogger('esd')
    for handler in _HANDLERS:
        package.removeHandler(handler)
    before = set(package.handlers)
    coloredlogs.install(level=level, fmt=LOG_FORMAT, stream=stream,
                        logger=package)
    _HANDLERS[:] = [h for h in package.handlers if h not in before]


def main(argv=None, stdout=None, stderr=None):
    """ Runs one command and returns its exit status """
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.log_level, stderr)
        oracle_bound(args.oracle_bound)
        if getattr(args, 'max_cuts', 0) < 0:
            raise UsageError("--max-cuts must be non-negative")
        return args.run(args, stdout)
    except ESDError as exc:
        _emit(stderr, exc.to_dict())
        return exc.exit_code


if __name__ == '__main__':
    sys.exit(main())
