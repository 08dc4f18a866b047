# Python packages
import pytest
# Local modules
from esd.poset import build_poset, enumerate_antichains
from esd.state_model import (
    CutRelation,
    build_state_model,
    state_model_from_partition,
    check_omega1,
    check_omega2,
    check_omega3,
    check_psi,
    check_width_extensible,
    check_interleaving_consistent,
    check_properties,
    compare_width_antichains,
    extend_to_width_antichain,
    biggest_width_antichain,
)
from esd.model_builders import (
    state_model_from_pairs,
    fig1c_state_model,
    fig3a_poset,
    fig3a_state_model,
    fig3b_poset,
    fig4b_state_model,
    fig4d_state_model,
)
from esd.errors import (
    UnknownElement,
    NotWidthAntichain,
    UsageError,
)


def test_state_model_accessors():
    """ Tests positions and endpoints of fig1c """
    sm = fig1c_state_model()
    assert sm.n == 2
    assert sm.state(1, 2) == '1.2'
    assert sm.position('2.3') == (2, 3)
    assert sm.length(1) == 3
    assert sm.initial(2) == '2.0' and sm.final(1) == '1.3'
    assert sm.shape() == (3, 3)
    assert ((1, 1), (2, 2)) in sm.positional_relation()
    with pytest.raises(UnknownElement):
        sm.state(1, 4)


def test_state_model_from_partition():
    """ Tests a bare poset gets one chain per unit of width """
    sm = state_model_from_partition(fig3b_poset())
    assert sm.n == 3
    assert len(sm.states) == 9


def test_omega1():
    """ Tests concurrent initial states """
    assert check_omega1(fig1c_state_model())
    assert check_omega1(fig3a_state_model())
    verdict = check_omega1(state_model_from_pairs((1, 1),
                                                  [((1, 0), (2, 0))]))
    assert not verdict
    assert verdict.witness == ('1.0', '2.0')


def test_omega2():
    """ Tests concurrent final states """
    assert check_omega2(fig1c_state_model())
    assert check_omega2(fig3a_state_model())
    verdict = check_omega2(state_model_from_pairs((1, 1),
                                                  [((1, 1), (2, 1))]))
    assert not verdict
    assert verdict.witness == ('1.1', '2.1')
    single = build_state_model(build_poset('xy', [('x', 'y')]), [['x', 'y']])
    assert check_omega2(single)


def test_omega3():
    """ Tests transitivity through predecessors on the figures """
    assert check_omega3(fig1c_state_model())
    assert check_omega3(fig4d_state_model())
    verdict = check_omega3(fig3a_state_model())
    assert not verdict
    assert verdict.witness == ('b', 'e', 'b')


def test_psi():
    """ Tests crossing chains in the barrier model """
    assert check_psi(fig4b_state_model())
    assert check_psi(state_model_from_pairs((2, 2), []))
    verdict = check_psi(fig4d_state_model())
    assert not verdict
    assert verdict.witness == ('1.1', '2.2', '2.1', '1.2')


def test_width_extensible():
    """ Tests the size one and two witnesses of fig3 """
    verdict = check_width_extensible(fig3a_poset())
    assert not verdict
    assert verdict.witness == ('b',)
    verdict = check_width_extensible(fig3b_poset())
    assert not verdict
    assert verdict.witness == ('b', 'i')
    assert check_width_extensible(fig1c_state_model())
    assert check_width_extensible(fig1c_state_model().poset, debug=True)
    assert check_width_extensible(build_poset([]))


def test_fig3b_singletons_extend():
    """ Tests every element of fig3b lies in some width-antichain """
    p = fig3b_poset()
    covered = set()
    for antichain in enumerate_antichains(p, size_filter=3):
        covered |= antichain.members
    assert covered == set(p.elements)


def test_interleaving_consistent():
    """ Tests the barrier jump breaks interleaving-consistency """
    verdict = check_interleaving_consistent(fig4b_state_model().poset)
    assert verdict and verdict.method == 'psi'
    verdict = check_interleaving_consistent(fig4d_state_model().poset)
    assert not verdict
    assert verdict.witness == ('1.1', '2.1')
    chain = build_poset('xyz', [('x', 'y'), ('y', 'z')])
    assert check_interleaving_consistent(chain)
    assert check_interleaving_consistent(build_poset([]))


def test_interleaving_without_width_extensibility():
    """ Tests the enumeration path on a poset that is not extensible """
    verdict = check_interleaving_consistent(fig3a_poset())
    assert verdict.method == 'enumeration'
    # Only {a,d} and {c,e}, which differ in both elements
    assert not verdict
    assert verdict.witness == ('a', 'd')


def test_compare_width_antichains():
    """ Tests the order on width-antichains """
    p = fig1c_state_model().poset
    assert compare_width_antichains(p, {'1.0', '2.0'},
                                    {'1.3', '2.3'}) is CutRelation.LESS
    assert compare_width_antichains(p, {'1.3', '2.3'},
                                    {'1.0', '2.0'}) is CutRelation.GREATER
    assert compare_width_antichains(p, {'1.2', '2.0'},
                                    {'1.2', '2.0'}) is CutRelation.EQUAL
    q = fig4d_state_model().poset
    assert compare_width_antichains(q, {'1.1', '2.0'}, {'1.0', '2.1'}) is \
        CutRelation.INCOMPARABLE
    with pytest.raises(NotWidthAntichain):
        compare_width_antichains(p, {'1.0'}, {'1.0', '2.0'})
    with pytest.raises(NotWidthAntichain):
        compare_width_antichains(p, {'1.0', '1.1'}, {'1.0', '2.0'})


def test_extend_to_width_antichain():
    """ Tests extension succeeds on fig1c and fails for b in fig3a """
    sm = fig1c_state_model()
    assert extend_to_width_antichain(sm, ['1.2']).states == \
        frozenset({'1.2', '2.0'})
    assert extend_to_width_antichain(fig3a_poset(), ['b']) is None
    with pytest.raises(NotWidthAntichain):
        extend_to_width_antichain(sm, ['1.0', '1.1'])


def test_biggest_width_antichain():
    """ Tests the top of fig1c is its two final states """
    assert biggest_width_antichain(fig1c_state_model()).states == \
        frozenset({'1.3', '2.3'})
    assert biggest_width_antichain(fig4d_state_model()).states == \
        frozenset({'1.3', '2.3'})


def test_check_properties():
    """ Tests the report, its aliases and unknown names """
    report = check_properties(fig4d_state_model(), ['psi', 'ic', 'we'])
    assert not report['psi']
    assert not report['ic']
    assert report['width_extensible']
    assert set(report.to_dict()) == {'psi', 'interleaving_consistent',
                                     'width_extensible'}
    record = report.to_dict()['psi']
    assert record['holds'] is False
    assert record['witness'] == ['1.1', '2.2', '2.1', '1.2']
    with pytest.raises(UsageError):
        check_properties(fig4d_state_model(), ['omega4'])
