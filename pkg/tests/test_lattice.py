# Python packages
import pytest
import itertools as it
# Local modules
from esd.poset import (
    build_poset,
    enumerate_antichains,
    enumerate_downsets_bruteforce,
)
from esd.utils import dotted
from esd.event_model import (
    build_event_model,
    build_event_model_from_processes,
    is_consistent_cut,
)
from esd.state_model import CutRelation, compare_width_antichains
from esd.transforms import es_transform
from esd.lattice import (
    LexicalCutEnumerator,
    enumerate_event_cuts,
    enumerate_width_antichains,
    cut_to_antichain,
    antichain_to_cut,
    lattice_meet_join,
    build_cut_lattice,
    build_width_antichain_lattice,
)
from esd.model_builders import (
    fig1b_event_model,
    fig1c_state_model,
    fig3a_poset,
    fig3b_poset,
    fig4c_event_model,
    fig4d_state_model,
    random_event_model,
)
from esd.errors import NotConsistent, NotWidthAntichain, NotWidthExtensible

FIG1B_CUTS = ['', 'a', 'ab', 'abc', 'e', 'ae', 'abe', 'abce', 'abef',
              'abcef', 'abefg', 'abcefg']
# Ladder lengths per process count, with their number of consistent cuts
LADDERS = {2: (12, 133), 3: (12, 1261), 4: (12, 11605), 5: (7, 11648),
           6: (5, 15336)}


def test_fig1b_cuts():
    """ Tests the twelve consistent cuts of fig1b """
    cuts = [cut.events for cut in enumerate_event_cuts(fig1b_event_model())]
    assert len(cuts) == 12
    assert set(cuts) == {frozenset(c) for c in FIG1B_CUTS}


def test_cuts_in_lexical_order():
    """ Tests frontiers come out strictly increasing """
    frontiers = [cut.frontier for cut in
                 enumerate_event_cuts(fig1b_event_model())]
    assert frontiers == sorted(frontiers)
    assert frontiers[0] == (0, 0) and frontiers[-1] == (3, 3)
    assert frontiers[:3] == [(0, 0), (0, 1), (1, 0)]


def test_barrier_cuts_match_oracle():
    """ Tests the barrier cuts against brute-force downsets """
    m = fig4c_event_model()
    expected = set(enumerate_downsets_bruteforce(m.poset))
    cuts = [cut.events for cut in enumerate_event_cuts(m)]
    assert len(cuts) == len(expected)
    assert set(cuts) == expected


def test_empty_model_cut():
    """ Tests the empty model has the empty cut only """
    m = build_event_model(build_poset([]), 0, {})
    assert [cut.events for cut in enumerate_event_cuts(m)] == [frozenset()]


def test_random_cuts_match_oracle():
    """ Tests random models against brute-force downsets """
    for seed in range(40):
        m = random_event_model(3, 3, p=0.2, seed=seed)
        cuts = [cut.events for cut in enumerate_event_cuts(m)]
        assert len(cuts) == len(set(cuts))
        assert set(cuts) == set(enumerate_downsets_bruteforce(m.poset))
        assert all(is_consistent_cut(m, cut) for cut in cuts)


def test_fig1c_width_antichains():
    """ Tests the twelve width-antichains of fig1c """
    found = {c.states for c in enumerate_width_antichains(
        fig1c_state_model())}
    expected = {a.members for a in enumerate_antichains(
        fig1c_state_model().poset, size_filter=2)}
    assert len(found) == 12
    assert found == expected
    assert frozenset({'1.0', '2.0'}) in found
    assert frozenset({'1.3', '2.3'}) in found


def test_fig4d_width_antichains():
    """ Tests the barrier state model has eight width-antichains """
    found = [c.states for c in enumerate_width_antichains(
        fig4d_state_model())]
    assert len(found) == len(set(found)) == 8


def test_chain_width_antichains():
    """ Tests a chain of k states has k singleton width-antichains """
    chain = build_poset('wxyz', [('w', 'x'), ('x', 'y'), ('y', 'z')])
    found = [c.states for c in enumerate_width_antichains(chain)]
    assert sorted(found) == sorted(frozenset(x) for x in 'wxyz')


def test_width_antichains_need_extensibility():
    """ Tests non-extensible posets are refused with their witness """
    with pytest.raises(NotWidthExtensible) as info:
        list(enumerate_width_antichains(fig3a_poset()))
    assert info.value.details['witness'] == ['b']
    with pytest.raises(NotWidthExtensible):
        list(enumerate_width_antichains(fig3b_poset()))


def test_cut_to_antichain():
    """ Tests the bijection on the listed fig1b cuts """
    m = fig1b_event_model()
    assert cut_to_antichain(m, set('abef')).states == {'1.2', '2.2'}
    assert cut_to_antichain(m, set()).states == {'1.0', '2.0'}
    assert cut_to_antichain(m, {'a'}).states == {'1.1', '2.0'}
    with pytest.raises(NotConsistent):
        cut_to_antichain(m, {'f'})


def test_antichain_to_cut():
    """ Tests the inverse map on fig1c states """
    m = fig1b_event_model()
    assert antichain_to_cut(m, {'1.2', '2.2'}).events == set('abef')
    assert antichain_to_cut(m, {'1.0', '2.0'}).events == set()
    assert antichain_to_cut(m, {'1.3', '2.3'}).events == set('abcefg')
    with pytest.raises(NotWidthAntichain):
        antichain_to_cut(m, {'1.0', '2.2'})
    with pytest.raises(NotWidthAntichain):
        antichain_to_cut(m, {'1.0', '1.1'})
    with pytest.raises(NotWidthAntichain):
        antichain_to_cut(m, {'1.0'})
    with pytest.raises(NotWidthAntichain):
        antichain_to_cut(m, {'1.9', '2.0'})


def test_bijection_is_inverse():
    """ Tests both maps compose to the identity on random models """
    for seed in range(20):
        m = random_event_model(3, 2, p=0.3, seed=seed)
        sm = es_transform(m)
        cuts = list(enumerate_event_cuts(m))
        antichains = {c.states for c in enumerate_width_antichains(sm)}
        assert len(cuts) == len(antichains)
        for cut in cuts:
            image = cut_to_antichain(m, cut)
            assert image.states in antichains
            assert antichain_to_cut(m, image).events == cut.events


def test_bijection_is_monotone():
    """ Tests cut inclusion matches the width-antichain order """
    m = fig1b_event_model()
    p = es_transform(m).poset
    cuts = list(enumerate_event_cuts(m))
    for g, h in it.product(cuts, repeat=2):
        relation = compare_width_antichains(p, cut_to_antichain(m, g),
                                            cut_to_antichain(m, h))
        below = relation in (CutRelation.LESS, CutRelation.EQUAL)
        assert below == (g.events <= h.events)


def test_meet_join():
    """ Tests meet and join on fig1c """
    sm = fig1c_state_model()
    meet, join = lattice_meet_join(sm, {'1.2', '2.1'}, {'1.1', '2.1'})
    assert join.states == {'1.2', '2.1'}
    assert meet.states == {'1.1', '2.1'}
    meet, join = lattice_meet_join(sm, {'1.0', '2.0'}, {'1.3', '2.3'})
    assert meet.states == {'1.0', '2.0'}
    assert join.states == {'1.3', '2.3'}
    meet, join = lattice_meet_join(sm, {'1.2', '2.0'}, {'1.2', '2.0'})
    assert meet.states == join.states == {'1.2', '2.0'}
    with pytest.raises(NotWidthAntichain):
        lattice_meet_join(sm, {'1.0', '1.1'}, {'1.0', '2.0'})


def test_meet_join_distributive():
    """ Tests closure and distributivity on the barrier lattice """
    sm = fig4d_state_model()
    family = [c.states for c in enumerate_width_antichains(sm)]
    members = set(family)

    def meet(a, b):
        return lattice_meet_join(sm, a, b)[0].states

    def join(a, b):
        return lattice_meet_join(sm, a, b)[1].states

    for a, b in it.product(family, repeat=2):
        assert meet(a, b) in members and join(a, b) in members
    for a, b, c in it.product(family, repeat=3):
        assert meet(a, join(b, c)) == join(meet(a, b), meet(a, c))
        assert join(a, meet(b, c)) == meet(join(a, b), join(a, c))


def test_cut_lattice():
    """ Tests the materialised lattice of fig1b """
    lattice = build_cut_lattice(fig1b_event_model())
    assert len(lattice) == 12
    assert lattice.bottom.events == frozenset()
    assert lattice.top.events == frozenset('abcefg')
    above = {c.events for c in lattice.successors_of(lattice.bottom)}
    assert above == {frozenset('a'), frozenset('e')}
    for k, cut in enumerate(lattice.cuts):
        for step in lattice.successors[k]:
            assert cut.events < lattice.cuts[step].events
            assert len(lattice.cuts[step].events - cut.events) == 1


def test_width_antichain_lattice():
    """ Tests the barrier lattice jumps both chains at once """
    lattice = build_width_antichain_lattice(fig4d_state_model())
    assert len(lattice) == 8
    assert lattice.bottom.states == {'1.0', '2.0'}
    assert lattice.top.states == {'1.3', '2.3'}
    jump = lattice.successors_of(frozenset({'1.1', '2.1'}))
    assert [c.states for c in jump] == [frozenset({'1.2', '2.2'})]


def test_enumeration_reads_per_cut():
    """ Tests clock reads per cut stay within four times a fitted c n^2 """
    reads_per_cut = {}
    for n, (length, expected) in LADDERS.items():
        enumerator = LexicalCutEnumerator(ladder_event_model(n, length))
        reads = [0]
        enumerator.clocks = [
            CountingTuple([CountingTuple(clock, reads) for clock in row],
                          reads)
            for row in enumerator.clocks]
        cuts = sum(1 for _ in enumerator)
        assert cuts == expected
        reads_per_cut[n] = reads[0] / cuts
    c = sum(r * n ** 2 for n, r in reads_per_cut.items()) / \
        sum(n ** 4 for n in reads_per_cut)
    for n, r in reads_per_cut.items():
        assert r <= 4 * c * n ** 2


def ladder_event_model(n, length):
    """ Process i sends its middle event to just past the middle of i+1 """
    mid = length // 2
    processes = [[dotted(i, k) for k in range(1, length + 1)]
                 for i in range(1, n + 1)]
    edges = [(dotted(i, mid), dotted(i + 1, mid + 1)) for i in range(1, n)]
    return build_event_model_from_processes(processes, edges)


class CountingTuple(tuple):
    """ A tuple that adds every element it hands out to a shared tally """

    def __new__(cls, values, tally):
        self = super().__new__(cls, values)
        self.tally = tally
        return self

    def __getitem__(self, key):
        item = super().__getitem__(key)
        self.tally[0] += len(item) if isinstance(key, slice) else 1
        return item
