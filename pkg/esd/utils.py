def dotted(i, k):
    """ Returns the "i.k" id used for state [i,k] and plain event (i,k) """
    return '%d.%d' % (i, k)


def parse_dotted(label):
    """ Returns (i, k) for an "i.k" id, or None if label is not one """
    head, sep, tail = str(label).partition('.')
    if not sep or not head.isdigit() or not tail.isdigit():
        return None
    return int(head), int(tail)


def shared_id(slots):
    """ Returns the id of a collapsed shared event carrying slots """
    return 'shared(%s)' % ','.join(dotted(i, k) for i, k in sorted(slots))


def flatten(array, level=1):
    """ Flattens array to given level """
    for i in range(level):
        array = [item for sublist in array for item in sublist]
    return array
