'''This package contains the builders of the :mod:`constructions` app.

* :func:`~constructions.utilities.build_gdss` deletes the secret states of a system
* :func:`~constructions.utilities.build_ghat` keeps the part of a system reachable from its secret initial states
* :func:`~constructions.utilities.build_observer` determinizes an automaton with respect to its observable events
* :func:`~constructions.utilities.build_cc` composes an automaton with an observer
* :func:`~constructions.utilities.observer_as_automaton` and :func:`~constructions.utilities.cc_as_automaton` give both structures the file format of a system

The DOT renderers for observers and products are registered here on
:func:`automata.utilities.export_dot`.
'''

import logging
from collections import deque

import networkx as nx

from automata.models import Automaton
from automata.utilities import dot_quote, export_dot, mark_initial, to_pydot_text
from constructions.models import (EMPTY, CCAutomaton, CCState, EventPair, ObserverAutomaton,
                                  format_subset, subset)

logger = logging.getLogger(__name__)


def build_gdss(g):
    '''This function builds the non-secret subautomaton of g.

    Its states are the non-secret states reachable from the non-secret initial states by non-secret
    runs; its initial states are the non-secret initial states.  The result may have no state at all.
    '''

    allowed = g.state_set - g.secret_states
    states = g.reachable_from(sorted(g.non_secret_initials), allowed=allowed)
    gdss = g.restricted_to(states, g.non_secret_initials)
    logger.debug('Non-secret subautomaton: %s', gdss)
    return gdss


def build_ghat(g):
    '''This function builds the initial-secret subautomaton of g, everything reachable from X0 ∩ X_S.'''

    secret_initials = g.initial_states & g.secret_states
    ghat = g.restricted_to(g.reachable_from(sorted(secret_initials)), secret_initials)
    logger.debug('Initial-secret subautomaton: %s', ghat)
    return ghat


def build_observer(aut):
    '''This function builds the accessible part of the observer of aut.

    The initial subset is the unobservable reach of the initial states (absent when empty).  The
    successor of a subset q under an observable event is the unobservable reach of its image, stored
    only when nonempty.
    '''

    alphabet = tuple(sorted(aut.observable_events))
    start = aut.unobservable_reach(aut.initial_states)
    if not start:
        return ObserverAutomaton(states=(), alphabet=alphabet, transitions={}, initial=None)

    initial = subset(start)
    seen = {initial}
    order = [initial]
    transitions = {}
    queue = deque([initial])
    while queue:
        current = queue.popleft()
        for event in alphabet:
            estimate = aut.unobservable_reach(aut.image(current, event))
            if not estimate:
                continue
            target = subset(estimate)
            transitions[(current, event)] = target
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
    observer = ObserverAutomaton(states=tuple(order), alphabet=alphabet, transitions=transitions, initial=initial)
    logger.debug('Observer: %s', observer)
    return observer


def build_cc(left, obs, stop_when=None):
    '''This function builds the concurrent composition of left and obs.

    An observable event moves both components; the right one goes to EMPTY when the observer has no
    such transition, or the event is outside its alphabet.  An unobservable event moves the left
    component only.  EMPTY is absorbing.

    When stop_when is given, exploration stops as soon as a state satisfying it has been stored and
    the result is flagged incomplete.
    '''

    start = EMPTY if obs.initial is None else obs.initial
    initial_states = tuple(CCState(state, start) for state in sorted(left.initial_states))
    seen = set(initial_states)
    states = list(initial_states)
    transitions = []
    queue = deque(initial_states)
    complete = True

    if stop_when is not None and any(stop_when(state) for state in initial_states):
        queue.clear()
        complete = False

    while queue:
        current = queue.popleft()
        for event, target_left in left.outgoing(current.left):
            if left.is_observable(event):
                pair = EventPair(event, event)
                if current.right is EMPTY:
                    right = EMPTY
                else:
                    right = obs.step(current.right, event) or EMPTY
            else:
                pair = EventPair(event, None)
                right = current.right
            target = CCState(target_left, right)
            transitions.append((current, pair, target))
            if target not in seen:
                seen.add(target)
                states.append(target)
                queue.append(target)
                if stop_when is not None and stop_when(target):
                    queue.clear()
                    complete = False
                    break

    cc = CCAutomaton(left=left, states=tuple(states), transitions=tuple(transitions),
                     initial_states=initial_states, complete=complete)
    logger.debug('Concurrent composition: %s%s', cc, '' if complete else ' (stopped early)')
    return cc


@export_dot.register
def _(obs: ObserverAutomaton):
    graph = nx.MultiDiGraph(name='observer', graph={'rankdir': 'LR'})
    ids = {state: 'q%i' % index for index, state in enumerate(obs.states)}
    for state in obs.states:
        graph.add_node(ids[state], label=dot_quote(format_subset(state)), shape='box')
    if obs.initial is not None:
        mark_initial(graph, [ids[obs.initial]])
    for (source, event), target in sorted(obs.transitions.items()):
        graph.add_edge(ids[source], ids[target], label=dot_quote(event))
    return to_pydot_text(graph)


@export_dot.register
def _(cc: CCAutomaton):
    graph = nx.MultiDiGraph(name='composition', graph={'rankdir': 'LR'})
    ids = {state: 'c%i' % index for index, state in enumerate(cc.states)}
    for state in cc.states:
        attributes = {'label': dot_quote(str(state)), 'shape': 'box'}
        if cc.left_secret(state):
            attributes['peripheries'] = 2
        if state.right is EMPTY:
            attributes['style'] = 'filled'
            attributes['fillcolor'] = 'lightgrey'
        graph.add_node(ids[state], **attributes)
    mark_initial(graph, [ids[state] for state in cc.initial_states])
    for source, pair, target in cc.transitions:
        attributes = {'label': dot_quote(str(pair))}
        if pair.observed is None:
            attributes['style'] = 'dashed'
        graph.add_edge(ids[source], ids[target], **attributes)
    return to_pydot_text(graph)


def observer_as_automaton(obs):
    '''The observer as a fully observable :class:`~automata.models.Automaton` whose states are named by their subsets.'''

    return Automaton.build(
        states=[format_subset(state) for state in obs.states],
        events=[(event, True) for event in obs.alphabet],
        transitions=[(format_subset(source), event, format_subset(target))
                     for (source, event), target in obs.transitions.items()],
        initial_states=[] if obs.initial is None else [format_subset(obs.initial)],
        secret_states=[])


def cc_as_automaton(cc):
    '''The composition as an :class:`~automata.models.Automaton` over event pairs.

    Pairs of an unobservable event stay unobservable, and a state is secret when its left component is.
    '''

    return Automaton.build(
        states=[str(state) for state in cc.states],
        events=[(str(pair), pair.observed is not None) for _, pair, _ in cc.transitions],
        transitions=[(str(source), str(pair), str(target)) for source, pair, target in cc.transitions],
        initial_states=[str(state) for state in cc.initial_states],
        secret_states=[str(state) for state in cc.states if cc.left_secret(state)])
