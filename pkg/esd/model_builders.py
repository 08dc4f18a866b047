# Python packages
import random
import itertools as it
# Local modules
from esd.utils import dotted, flatten
from esd.poset import build_poset
from esd.event_model import build_event_model_from_processes
from esd.state_model import build_state_model


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def fig1b_event_model():
    """ Two processes a, b, c and e, f, g with one message b -> f """
    return build_event_model_from_processes([['a', 'b', 'c'],
                                             ['e', 'f', 'g']],
                                            [('b', 'f')])


def _chains(lengths):
    return [[dotted(i, k) for k in range(n_i + 1)]
            for i, n_i in enumerate(lengths, 1)]


def state_model_from_pairs(lengths, pairs, attrs=None):
    """ Builds a state model over states "i.k" with extra cross pairs """
    chains = _chains(lengths)
    states = flatten(chains)
    order = [(a, b) for chain in chains for a, b in zip(chain, chain[1:])]
    poset = build_poset(states, order + [(dotted(*a), dotted(*b))
                                         for a, b in pairs])
    return build_state_model(poset, chains, attrs)


def fig1c_state_model():
    """ State model of fig1b: [1,1] < [2,2] across the chains """
    return state_model_from_pairs((3, 3), [((1, 1), (2, 2))])


def fig3a_poset():
    """ Five elements where b has no concurrent partner on d < e """
    return build_poset('abcde', [('a', 'b'), ('b', 'c'), ('d', 'e'),
                                 ('d', 'b'), ('b', 'e')])


def fig3a_state_model():
    return build_state_model(fig3a_poset(), [['a', 'b', 'c'], ['d', 'e']])


def fig3b_poset():
    """ Three chains of three with b < f and e < i """
    rows = ['abc', 'def', 'ghi']
    pairs = [(x, y) for row in rows for x, y in zip(row, row[1:])]
    return build_poset('abcdefghi', pairs + [('b', 'f'), ('e', 'i')])


def fig4a_event_model():
    """ Two processes of three events with the message (1,2) -> (2,2) """
    processes = [[dotted(i, k) for k in (1, 2, 3)] for i in (1, 2)]
    return build_event_model_from_processes(processes, [('1.2', '2.2')])


def fig4b_state_model():
    return state_model_from_pairs((3, 3), [((1, 1), (2, 2))])


BARRIER = 'shared(1.2,2.2)'


def fig4c_event_model():
    """ Two processes meeting at a barrier, their second events """
    processes = [['1.1', BARRIER, '1.3'], ['2.1', BARRIER, '2.3']]
    return build_event_model_from_processes(processes)


def fig4d_state_model():
    """ State model of the barrier: each chain waits for the other """
    return state_model_from_pairs((3, 3), [((1, 1), (2, 2)),
                                           ((2, 1), (1, 2))])


def zigzag_event_model():
    """
    P2 sends m1 to P1 as its first event; P1 then sends m2 to P2, which
    receives it as its second event and finishes with a local event
    """
    return build_event_model_from_processes(
        [['r1', 's2'], ['s1', 'r2', 'l3']], [('s1', 'r1'), ('s2', 'r2')])


def zigzag_marks():
    """ Checkpoints [1,0], [1,1], [1,2] and [2,0], [2,2], [2,3] """
    return {1: [0, 1, 2], 2: [0, 2, 3]}


def random_event_model(n, length, p=0.3, seed=None):
    """
    Generates an event model without shared events. Events are laid out in
    a random interleaving and each earlier event on another process sends
    a message to each later one with probability p.
    """
    rng = _rng(seed)
    lengths = [length] * n if isinstance(length, int) else list(length)
    schedule = flatten([[i] * n_i for i, n_i in enumerate(lengths, 1)])
    rng.shuffle(schedule)
    placed, counts = [], [0] * len(lengths)
    for i in schedule:
        counts[i - 1] += 1
        placed.append((i, dotted(i, counts[i - 1])))
    edges = [(a, b) for (i, a), (j, b) in it.combinations(placed, 2)
             if i != j and rng.random() < p]
    processes = [[dotted(i, k) for k in range(1, n_i + 1)]
                 for i, n_i in enumerate(lengths, 1)]
    return build_event_model_from_processes(processes, edges,
                                            allow_empty_process=True)


def random_state_model(size, n, p=0.3, seed=None):
    """
    Generates a poset of size elements split into n nonempty chains, named
    "i.k" along chain i, with random cross relations consistent with a
    random linear extension
    """
    rng = _rng(seed)
    n = max(1, min(n, size))
    cuts = sorted(rng.sample(range(1, size), n - 1))
    lengths = [hi - lo for lo, hi in zip([0] + cuts, cuts + [size])]
    schedule = flatten([[i] * c for i, c in enumerate(lengths, 1)])
    rng.shuffle(schedule)
    placed, counts = [], [0] * n
    for i in schedule:
        placed.append((i, dotted(i, counts[i - 1])))
        counts[i - 1] += 1
    pairs = [(a, b) for (i, a), (j, b) in it.combinations(placed, 2)
             if i != j and rng.random() < p]
    chains = [[dotted(i, k) for k in range(c)]
              for i, c in enumerate(lengths, 1)]
    order = [(a, b) for chain in chains for a, b in zip(chain, chain[1:])]
    poset = build_poset(flatten(chains), order + pairs)
    return build_state_model(poset, chains)


def random_marking(sm, max_checkpoints=5, seed=None):
    """ Marks both endpoints of each chain plus random interior states """
    rng = _rng(seed)
    marks = {}
    for i in range(1, sm.n + 1):
        last = sm.length(i)
        interior = list(range(1, last))
        extra = rng.randint(0, min(len(interior), max(0, max_checkpoints - 2)))
        marks[i] = sorted({0, last} | set(rng.sample(interior, extra)))
    return marks
