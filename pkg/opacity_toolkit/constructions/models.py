'''This package has the data structures for the :mod:`constructions` app.

There are two derived structures, both built by :mod:`constructions.utilities`:

* The observer of the non-secret subautomaton as :class:`~constructions.models.ObserverAutomaton`
* The concurrent composition of an automaton with that observer as :class:`~constructions.models.CCAutomaton`

Subsets of states are canonicalised as sorted tuples of state names.  The empty right component of a
product state is the distinguished :data:`~constructions.models.EMPTY` value, never an observer state.
'''

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Union


class Empty(enum.Enum):
    '''The type of the absorbing empty estimate.'''

    EMPTY = '{}'

    def __repr__(self):
        return 'EMPTY'


EMPTY = Empty.EMPTY


def subset(states):
    '''The canonical form of a set of states.'''
    return tuple(sorted(set(states)))


def format_subset(right):
    if right is EMPTY:
        return '{}'
    return '{%s}' % ','.join(right)


class CCState(NamedTuple):
    '''A state of a concurrent composition: a left state and an observer state or EMPTY.'''

    left: str
    right: Union[tuple, Empty]

    def sort_key(self):
        if self.right is EMPTY:
            return (self.left, 0, ())
        return (self.left, 1, self.right)

    def __str__(self):
        return '(%s,%s)' % (self.left, format_subset(self.right))


class EventPair(NamedTuple):
    '''An event of a concurrent composition.

    observed is the event itself for an observable event and None for an unobservable one.
    '''

    event: str
    observed: Optional[str]

    def sort_key(self):
        return (self.event, self.observed is None)

    def __str__(self):
        return '(%s,%s)' % (self.event, 'eps' if self.observed is None else self.observed)


@dataclass(frozen=True)
class ObserverAutomaton:
    '''This object is the observer of an automaton: a partial deterministic automaton over nonempty subsets.

    Only the part accessible from initial is stored.  initial is None when the unobservable reach of
    the source automaton's initial states is empty.
    '''

    states: tuple
    alphabet: tuple
    transitions: dict = field(hash=False)
    initial: Optional[tuple] = None

    def __str__(self):
        return 'ObserverAutomaton(%i states, %i transitions)' % (len(self.states), len(self.transitions))

    def step(self, state, event):
        '''The successor of a subset under an observable event, or None when undefined.'''
        return self.transitions.get((state, event))

    def run(self, observation):
        '''The state reached from initial by an observation, or None when the observation is not accepted.'''
        state = self.initial
        for event in observation:
            if state is None:
                return None
            state = self.step(state, event)
        return state

    def accepts(self, observation):
        return self.run(observation) is not None


@dataclass(frozen=True)
class CCAutomaton:
    '''This object is the concurrent composition of a left automaton and an observer.

    Transitions are (source, pair, target) triples of :class:`~constructions.models.CCState` and
    :class:`~constructions.models.EventPair`.  complete is False when exploration was stopped early.
    '''

    left: object = field(compare=False)
    states: tuple
    transitions: tuple
    initial_states: tuple
    complete: bool = True

    def __str__(self):
        return 'CCAutomaton(%i states, %i transitions)' % (len(self.states), len(self.transitions))

    @cached_property
    def _adjacency(self):
        index = defaultdict(list)
        for source, pair, target in self.transitions:
            index[source].append((pair, target))
        for moves in index.values():
            moves.sort(key=lambda move: (move[0].sort_key(), move[1].sort_key()))
        return dict(index)

    def outgoing(self, state):
        '''All (pair, target) moves leaving a product state, in sorted order.'''
        return self._adjacency.get(state, [])

    def left_secret(self, state):
        '''Whether the left component of a product state is a secret state.'''
        return state.left in self.left.secret_states

    def leaking_secret_states(self):
        '''States whose left component is secret and whose right component is EMPTY.'''
        return tuple(state for state in self.states if self.left_secret(state) and state.right is EMPTY)

    def non_leaking_secret_states(self):
        return tuple(state for state in self.states if self.left_secret(state) and state.right is not EMPTY)

    def leaking_states(self):
        '''States whose right component is EMPTY, whatever their left component.'''
        return tuple(state for state in self.states if state.right is EMPTY)
