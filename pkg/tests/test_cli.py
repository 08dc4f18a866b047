# Python packages
import io
import re
import json
import logging
from pathlib import Path
# Local modules
from esd import trace_io
from esd.cli import main

FIXTURES = Path(__file__).parent / 'fixtures'


def test_validate():
    """ Tests exit codes for valid, cyclic, malformed and missing traces """
    code, out, _ = run('validate', fixture('fig1b'))
    assert code == 0
    assert json.loads(out) == {'valid': True, 'kind': 'event'}
    code, _, err = run('validate', fixture('bad_cycle'))
    assert code == 2
    assert error(err)['error'] == 'CycleError'
    code, _, err = run('validate', fixture('same_process_concurrent'))
    assert code == 2
    assert error(err)['error'] == 'NotTotallyOrdered'
    assert run('validate', fixture('malformed'))[0] == 3
    assert run('validate', fixture('missing'))[0] == 3


def test_transform_es():
    """ Tests the message trace becomes its state model """
    code, out, _ = run('transform', fixture('fig4a'), '--direction', 'es')
    assert code == 0
    sm = trace_io.parse(out).model
    expected = trace_io.load(fixture('fig4b')).model
    assert sm.chains.chains == expected.chains.chains
    assert sm.poset.same_order(expected.poset)
    assert out == trace_io.canonical_json(trace_io.dump(sm)) + '\n'
    assert out == trace_io.canonical_json(trace_io.dump(expected)) + '\n'


def test_transform_se():
    """ Tests the barrier state model becomes the shared-event trace """
    code, out, _ = run('transform', fixture('fig4d'), '--direction', 'se')
    assert code == 0
    m = trace_io.parse(out).model
    assert m.signature() == trace_io.load(fixture('fig4c')).model.signature()


def test_transform_se_invalid():
    """ Tests an invalid state model prints its report and exits 2 """
    code, out, _ = run('transform', fixture('fig3a'), '--direction', 'se')
    assert code == 2
    report = json.loads(out)
    assert report['valid'] is False
    assert report['components'][0]['chains'] == [1]


def test_transform_kind_mismatch():
    """ Tests es needs an event trace """
    code, _, err = run('transform', fixture('fig1c'), '--direction', 'es')
    assert code == 4
    assert error(err)['error'] == 'KindMismatch'


def test_check():
    """ Tests the property report of fig3a and a chosen subset """
    code, out, _ = run('check', fixture('fig3a'))
    assert code == 0
    report = json.loads(out)
    assert report['omega3']['holds'] is False
    assert report['width_extensible']['witness'] == ['b']
    code, out, _ = run('check', fixture('fig4d'), '--properties', 'psi,we')
    assert set(json.loads(out)) == {'psi', 'width_extensible'}
    assert run('check', fixture('fig4d'), '--properties', 'omega9')[0] == 4


def test_check_figure_verdicts():
    """ Tests the verdicts listed for fig1c, fig4d and fig3b """
    report = output('check', fixture('fig1c'), '--properties', 'we,ic')
    assert report['width_extensible']['holds'] is True
    assert report['interleaving_consistent']['holds'] is True
    report = output('check', fixture('fig4d'), '--properties', 'psi,ic')
    assert report['psi']['witness'] == ['1.1', '2.2', '2.1', '1.2']
    assert report['interleaving_consistent']['witness'] == ['1.1', '2.1']
    report = output('check', fixture('fig3b'), '--properties', 'we')
    assert report['width_extensible']['witness'] == ['b', 'i']


def test_output_is_deterministic():
    """ Tests two runs print byte-identical output """
    argv = ('cuts', fixture('fig4d'), '--family', 'antichains')
    assert run(*argv)[:2] == run(*argv)[:2]


def test_cuts_downsets():
    """ Tests fig1b streams twelve cuts and a count """
    code, out, _ = run('cuts', fixture('fig1b'), '--family', 'downsets')
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert len(lines) == 13
    assert lines[0] == {'cut': []}
    assert lines[-1] == {'count': 12}


def test_cuts_antichains():
    """ Tests width-antichains of fig1c and the refusal of fig3a """
    code, out, _ = run('cuts', fixture('fig1c'), '--family', 'antichains')
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert lines[0] == {'cut': ['1.0', '2.0']}
    assert lines[-1] == {'count': 12}
    code, _, err = run('cuts', fixture('fig3a'), '--family', 'antichains')
    assert code == 2
    assert error(err)['error'] == 'NotWidthExtensible'


def test_repeated_runs_keep_one_log_handler():
    """ Tests each run logs once, to its own stream """
    run('validate', fixture('fig1b'))
    handlers = len(logging.getLogger('esd').handlers)
    for _ in range(3):
        code, _, err = run('--log-level', 'DEBUG', 'cuts', fixture('fig1b'),
                           '--family', 'downsets')
        assert code == 0
        assert err.count('Enumerated 12 cuts') == 1
    assert len(logging.getLogger('esd').handlers) == handlers


def test_cut_limit():
    """ Tests the limit stops the stream with exit code 5 """
    code, out, err = run('cuts', fixture('fig1b'), '--family', 'downsets',
                         '--max-cuts', '5')
    assert code == 5
    assert len(out.splitlines()) == 5
    record = error(err)
    assert record['error'] == 'CutLimitExceeded'
    assert record['limit'] == 5


def test_usage_errors():
    """ Tests bad arguments and kinds exit with code 4 """
    assert run('cuts')[0] == 4
    assert run('cuts', fixture('fig1b'), '--family', 'downsets',
               '--max-cuts', '-1')[0] == 4
    assert run('cuts', fixture('fig1c'), '--family', 'downsets')[0] == 4
    assert run('frobnicate')[0] == 4


def test_analyze_predicate():
    """ Tests each predicate mode on the fixture predicates """
    barrier = ('--model', fixture('fig4d'), '--pred',
               fixture('pred_barrier'))
    assert output('analyze', 'predicate', *barrier, '--count') == \
        {'count': 1}
    assert output('analyze', 'predicate', *barrier, '--first') == \
        {'first': ['1.1', '2.1']}
    assert output('analyze', 'predicate', *barrier, '--definitely') == \
        {'holds': True, 'method': 'lattice'}
    code, out, _ = run('analyze', 'predicate', *barrier)
    assert code == 0
    assert [json.loads(line) for line in out.splitlines()] == \
        [{'cut': ['1.1', '2.1']}, {'count': 1}]
    permits = ('--model', fixture('permits'))
    assert output('analyze', 'predicate', *permits, '--pred',
                  fixture('pred_permits'), '--count') == {'count': 5}
    assert output('analyze', 'predicate', *permits, '--pred',
                  fixture('pred_deadlock'), '--count') == {'count': 1}


def test_analyze_predicate_on_event_trace():
    """ Tests an event trace is read through its state model """
    assert output('analyze', 'predicate', '--model', fixture('fig1b'),
                  '--pred', fixture('pred_permits'), '--count') == \
        {'count': 0}


def test_analyze_checkpoints():
    """ Tests the zigzag trace has one useless checkpoint """
    args = ('analyze', 'checkpoints', '--model', fixture('zigzag'),
            '--marks', fixture('zigzag_marks'))
    report = output(*args)
    assert report['useless'] == ['1.1']
    assert report['method'] == 'cycle'
    report = output(*args, '--engine', 'both')
    assert report['agree'] is True
    assert run(*args[:3], fixture('zigzag_marks'), '--marks',
               fixture('zigzag'))[0] == 4


def fixture(name):
    return str(FIXTURES / ('%s.json' % name))


def run(*argv):
    """ Runs the command line and returns its code, stdout and stderr """
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def error(err):
    """ The JSON error record, skipping any log lines before it """
    return json.loads(err[re.search(r'^\{', err, re.M).start():])


def output(*argv):
    code, out, _ = run(*argv)
    assert code == 0
    return json.loads(out)
