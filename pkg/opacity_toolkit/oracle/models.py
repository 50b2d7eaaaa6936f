'''This package has the data structures for the :mod:`oracle` app.

The oracle explores pairs of state sets, one pair per observation word, as :class:`~oracle.models.OraclePairState`.
'''

from typing import NamedTuple


class OraclePairState(NamedTuple):
    '''The two state sets the oracle tracks for an observation word.

    reach holds every state reached by some run with this observation from the starting set of the
    property; safe holds every state reached by a matching run from the non-secret initial states
    (a non-secret one for the strong properties).  An empty safe set means no matching run exists.
    '''

    reach: frozenset
    safe: frozenset


class MalformedWitness(ValueError):
    '''Raised when a witness does not replay through the system at all.'''
