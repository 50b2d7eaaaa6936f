'''This package contains the data structures for the :mod:`automata` app.

The main object is :class:`~automata.models.Automaton`, a nondeterministic finite automaton whose
alphabet is partitioned into observable and unobservable events and whose states may be marked secret.
Around it are:

* The events as :class:`~automata.models.Event` and the transitions as :class:`~automata.models.Transition`
* A path through an automaton as :class:`~automata.models.Run`
* The file-level description of an automaton as :class:`~automata.models.AutomatonDocument`
* The function :func:`~automata.models.validate` which turns a document into an automaton.

State and event names are opaque strings.  Every set is iterated in sorted order so that all
constructions built on top of these objects are reproducible.
'''

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import networkx as nx
from django.core.exceptions import ValidationError

logger = logging.getLogger(__name__)


class Event(NamedTuple):
    '''An event name together with its observability flag.'''

    name: str
    observable: bool


class Transition(NamedTuple):
    '''One element of the transition relation.'''

    source: str
    event: str
    target: str


@dataclass(frozen=True)
class AutomatonDocument:
    '''This object is the concrete encoding of an automaton, as read from or written to a file.

    The lists are stored sorted, so two documents which only differ in the order of their
    entries compare equal.
    '''

    format_version: int
    states: tuple = ()
    events: tuple = ()
    transitions: tuple = ()
    initial: tuple = ()
    secret: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'states', tuple(sorted(self.states)))
        object.__setattr__(self, 'events', tuple(sorted(Event(str(name), bool(flag)) for name, flag in self.events)))
        object.__setattr__(self, 'transitions', tuple(sorted(Transition(*triple) for triple in self.transitions)))
        object.__setattr__(self, 'initial', tuple(sorted(self.initial)))
        object.__setattr__(self, 'secret', tuple(sorted(self.secret)))


@dataclass(frozen=True)
class Run:
    '''This object is a path x0 -s1-> x1 -s2-> ... -sn-> xn through an automaton.

    The start state is required; steps is a sequence of (event, state) pairs.
    '''

    start: str
    steps: tuple = ()

    @property
    def events(self):
        '''The event sequence labelling this run.'''
        return tuple(event for event, _ in self.steps)

    @property
    def states(self):
        '''All visited states, start state included.'''
        return (self.start,) + tuple(state for _, state in self.steps)

    @property
    def end(self):
        return self.states[-1]

    def __len__(self):
        return len(self.steps)

    def extended(self, event, state):
        '''Returns a new run with one more step.'''
        return Run(self.start, self.steps + ((event, state),))

    def is_valid_in(self, aut):
        '''Checks that every step of this run is a transition of aut.'''
        if self.start not in aut.state_set:
            return False
        current = self.start
        for event, state in self.steps:
            if state not in aut.successors(current, event):
                return False
            current = state
        return True

    def is_non_secret_in(self, aut):
        '''A run is non-secret if none of its states, the start included, is secret.'''
        return aut.secret_states.isdisjoint(self.states)

    def __str__(self):
        text = self.start
        for event, state in self.steps:
            text += ' -%s-> %s' % (event, state)
        return text


@dataclass(frozen=True)
class Automaton:
    '''This object is a partially-observed nondeterministic finite automaton.

    The alphabet is a tuple of :class:`~automata.models.Event`, so the observable and unobservable
    event sets partition it by construction.  Instances are immutable; adjacency indexes are built
    lazily on first use.  Use :func:`~automata.models.validate` to build one from a document, which
    also prunes unreachable states.
    '''

    states: tuple
    events: tuple
    transitions: tuple
    initial_states: frozenset
    secret_states: frozenset
    pruned_states: tuple = field(default=(), compare=False)

    @classmethod
    def build(cls, states, events, transitions, initial_states, secret_states, pruned_states=()):
        '''Builds an automaton from arbitrary iterables, canonicalising the ordering.'''
        return cls(
            states=tuple(sorted(set(states))),
            events=tuple(sorted(set(Event(*event) for event in events))),
            transitions=tuple(sorted(set(Transition(*triple) for triple in transitions))),
            initial_states=frozenset(initial_states),
            secret_states=frozenset(secret_states),
            pruned_states=tuple(sorted(pruned_states)))

    def __str__(self):
        return 'Automaton(%i states, %i events, %i transitions)' % (
            len(self.states), len(self.events), len(self.transitions))

    @cached_property
    def state_set(self):
        return frozenset(self.states)

    @cached_property
    def event_names(self):
        return tuple(event.name for event in self.events)

    @cached_property
    def observable_events(self):
        return frozenset(event.name for event in self.events if event.observable)

    @cached_property
    def unobservable_events(self):
        return frozenset(event.name for event in self.events if not event.observable)

    @cached_property
    def non_secret_initials(self):
        '''The non-secret initial states, X0 minus the secret states.'''
        return self.initial_states - self.secret_states

    @cached_property
    def _adjacency(self):
        index = defaultdict(lambda: defaultdict(set))
        for source, event, target in self.transitions:
            index[source][event].add(target)
        return {source: {event: frozenset(targets) for event, targets in by_event.items()}
                for source, by_event in index.items()}

    def successors(self, state, event):
        '''The one-step successors of a state under an event (empty if none).'''
        return self._adjacency.get(state, {}).get(event, frozenset())

    def outgoing(self, state):
        '''All (event, target) pairs leaving a state, in sorted order.'''
        by_event = self._adjacency.get(state, {})
        return [(event, target) for event in sorted(by_event) for target in sorted(by_event[event])]

    def is_observable(self, event):
        if event in self.observable_events:
            return True
        if event in self.unobservable_events:
            return False
        raise ValueError('Event %r is not in the alphabet.' % event)

    def image(self, src, event):
        '''The set of states reachable from src by exactly one event.'''
        result = set()
        for state in src:
            result.update(self.successors(state, event))
        return frozenset(result)

    def unobservable_reach(self, src):
        '''All states reachable from src by zero or more unobservable transitions.'''
        reached = set(src)
        stack = list(reached)
        while stack:
            state = stack.pop()
            for event in self.unobservable_events:
                for target in self.successors(state, event):
                    if target not in reached:
                        reached.add(target)
                        stack.append(target)
        return frozenset(reached)

    def delta_extended(self, src, sequence):
        '''The states reachable from src under exactly the event sequence.

        Unobservable events are ordinary events here, no closure is applied.
        '''
        current = frozenset(src)
        for event in sequence:
            self.is_observable(event)
            current = self.image(current, event)
        return current

    def project(self, sequence):
        '''The natural projection: erases unobservable events, preserving order.'''
        return tuple(event for event in sequence if self.is_observable(event))

    def enumerate_runs(self, max_len):
        '''Yields every run of at most max_len steps starting at an initial state.

        Runs come out by length, then by event names, then by visited states.
        '''
        if max_len < 0:
            raise ValueError('max_len must be non-negative.')
        layer = [Run(state) for state in sorted(self.initial_states)]
        for length in range(max_len + 1):
            layer.sort(key=lambda run: (run.events, run.states))
            yield from layer
            if length == max_len:
                break
            layer = [run.extended(event, target) for run in layer for event, target in self.outgoing(run.end)]
            if not layer:
                break

    def reachable_from(self, sources, allowed=None):
        '''Plain forward reachability from sources, optionally restricted to an allowed set of states.'''
        kept = self.state_set if allowed is None else self.state_set & frozenset(allowed)
        graph = nx.DiGraph()
        graph.add_nodes_from(kept)
        graph.add_edges_from((t.source, t.target) for t in self.transitions
                             if t.source in kept and t.target in kept)
        sources = [state for state in sources if allowed is None or state in allowed]
        reached = set(sources)
        for state in sources:
            if state in graph:
                reached.update(nx.descendants(graph, state))
        return frozenset(reached)

    def restricted_to(self, states, initial_states):
        '''The subautomaton induced by states.

        Only transitions between kept states survive, and the alphabet shrinks to the events that
        still label a transition.  Observability flags are inherited.
        '''
        kept = frozenset(states)
        transitions = [t for t in self.transitions if t.source in kept and t.target in kept]
        labels = {t.event for t in transitions}
        return Automaton.build(
            states=kept,
            events=[event for event in self.events if event.name in labels],
            transitions=transitions,
            initial_states=frozenset(initial_states) & kept,
            secret_states=self.secret_states & kept)

    def with_initial_states(self, initial_states):
        '''The same automaton with a different set of initial states.'''
        return Automaton(self.states, self.events, self.transitions,
                         frozenset(initial_states), self.secret_states)


def validate(document):
    '''This function checks an :class:`~automata.models.AutomatonDocument` and returns an :class:`~automata.models.Automaton`.

    States that are unreachable from the initial states are pruned with a warning.
    A :class:`~django.core.exceptions.ValidationError` is raised for an empty state set, a reference to
    an undeclared state or event, or an event declared both observable and unobservable.
    '''

    if not document.states:
        raise ValidationError('An automaton needs at least one state.', code='empty')
    declared = set(document.states)
    if len(declared) != len(document.states):
        raise ValidationError('Duplicate state names.', code='duplicate')

    flags = {}
    for name, observable in document.events:
        if flags.setdefault(name, observable) != observable:
            raise ValidationError('Event %(event)s is declared both observable and unobservable.',
                                  code='partition', params={'event': name})

    errors = []
    for source, event, target in document.transitions:
        for state in (source, target):
            if state not in declared:
                errors.append(ValidationError('Transition (%s, %s, %s) uses undeclared state %s.' % (
                    source, event, target, state), code='unknown'))
        if event not in flags:
            errors.append(ValidationError('Transition (%s, %s, %s) uses undeclared event %s.' % (
                source, event, target, event), code='unknown'))
    for state in list(document.initial) + list(document.secret):
        if state not in declared:
            errors.append(ValidationError('Undeclared state %s.' % state, code='unknown'))
    if errors:
        raise ValidationError(errors)

    full = Automaton.build(document.states, flags.items(), document.transitions,
                           document.initial, document.secret)
    reachable = full.reachable_from(full.initial_states)
    if not reachable:
        raise ValidationError('No state is reachable from the initial states.', code='empty')
    pruned = full.state_set - reachable
    if pruned:
        logger.warning('Pruned states unreachable from the initial states: %s', ', '.join(sorted(pruned)))
    if reachable <= full.secret_states:
        logger.warning('Every state is secret; no non-secret run exists.')

    kept_transitions = [t for t in full.transitions if t.source in reachable]
    return Automaton.build(reachable, full.events, kept_transitions, full.initial_states,
                           full.secret_states & reachable, pruned_states=pruned)
