'''This package contains the reference deciders of the :mod:`oracle` app.

The deciders follow the definitions directly.  They never build the non-secret subautomaton, the
initial-secret subautomaton or a concurrent composition: non-secret reachability is recomputed here,
on the system itself, over pairs of state sets indexed by observation words.  The pair space is finite,
so each decider is exact.

* :func:`~oracle.utilities.oracle_cso`, :func:`~oracle.utilities.oracle_iso`
* :func:`~oracle.utilities.oracle_scso`, :func:`~oracle.utilities.oracle_siso`, :func:`~oracle.utilities.oracle_inf_sso`
* :func:`~oracle.utilities.replay_witness` to confirm a witness produced by :mod:`verifiers`
'''

from collections import deque

from oracle.models import MalformedWitness, OraclePairState
from verifiers.models import Property


def _closure(g, states, allowed=None):
    reached = {state for state in states if allowed is None or state in allowed}
    stack = list(reached)
    while stack:
        state = stack.pop()
        for event, target in g.outgoing(state):
            if event in g.unobservable_events and target not in reached and (allowed is None or target in allowed):
                reached.add(target)
                stack.append(target)
    return frozenset(reached)


def _advance(g, states, event, allowed=None):
    image = set()
    for state in states:
        image.update(g.successors(state, event))
    return _closure(g, image, allowed)


def _non_secret(g):
    return g.state_set - g.secret_states


def reach_after(g, starts, observation, allowed=None):
    '''All states reached from starts by some run with this observation, optionally restricted to allowed states.'''
    current = _closure(g, starts, allowed)
    for event in observation:
        current = _advance(g, current, event, allowed)
    return current


def safe_after(g, observation):
    '''All states reached from the non-secret initial states by a non-secret run with this observation.'''
    return reach_after(g, g.initial_states - g.secret_states, observation, _non_secret(g))


def _explore(g, starts, matching_allowed, violates):
    '''Breadth-first search over pairs; returns False as soon as a pair violates.'''

    start = OraclePairState(_closure(g, starts), _closure(g, g.initial_states - g.secret_states, matching_allowed))
    if not start.reach:
        return True
    seen = {start}
    queue = deque([start])
    events = sorted(g.observable_events)
    while queue:
        pair = queue.popleft()
        if violates(pair):
            return False
        for event in events:
            reach = _advance(g, pair.reach, event)
            if not reach:
                continue
            following = OraclePairState(reach, _advance(g, pair.safe, event, matching_allowed))
            if following not in seen:
                seen.add(following)
                queue.append(following)
    return True


def oracle_scso(g):
    '''Strong current-state opacity from its definition.

    Violated by an observation after which some run from X0 ends in a secret state while no non-secret
    run from the non-secret initial states has the same observation.
    '''
    return _explore(g, g.initial_states, _non_secret(g),
                    lambda pair: bool(pair.reach & g.secret_states) and not pair.safe)


def oracle_siso(g):
    '''Strong initial-state opacity: every run from X0 ∩ X_S is matched by a non-secret run.'''
    return _explore(g, g.initial_states & g.secret_states, _non_secret(g),
                    lambda pair: bool(pair.reach) and not pair.safe)


def oracle_inf_sso(g):
    '''Strong infinite-step opacity: every observation of G is the observation of some non-secret run.'''
    return _explore(g, g.initial_states, _non_secret(g),
                    lambda pair: bool(pair.reach) and not pair.safe)


def oracle_iso(g):
    '''Standard initial-state opacity: every run from X0 ∩ X_S is matched by any run from the non-secret initial states.'''
    return _explore(g, g.initial_states & g.secret_states, None,
                    lambda pair: bool(pair.reach) and not pair.safe)


def oracle_cso(g):
    '''Standard current-state opacity: no observation leaves only secret states as possible current states.'''

    start = _closure(g, g.initial_states)
    if not start:
        return True
    seen = {start}
    queue = deque([start])
    events = sorted(g.observable_events)
    while queue:
        reach = queue.popleft()
        if reach <= g.secret_states:
            return False
        for event in events:
            following = _advance(g, reach, event)
            if following and following not in seen:
                seen.add(following)
                queue.append(following)
    return True


ORACLES = {
    Property.CSO: oracle_cso,
    Property.ISO: oracle_iso,
    Property.SCSO: oracle_scso,
    Property.SISO: oracle_siso,
    Property.INF_SSO: oracle_inf_sso,
}


def replay_witness(g, witness, prop):
    '''This function confirms a witness against the definitions.

    A :class:`~oracle.models.MalformedWitness` is raised when the run does not replay through g or does
    not match the recorded event sequence and observation.  Otherwise the result says whether the run
    has the violation shape of the property and whether its observation really has no matching run.
    '''

    prop = Property(prop)
    run = witness.run
    if not run.is_valid_in(g) or run.start not in g.initial_states:
        raise MalformedWitness('The run %s does not replay from an initial state.' % run)
    if tuple(run.events) != tuple(witness.event_sequence):
        raise MalformedWitness('The run does not carry the recorded event sequence.')
    if g.project(run.events) != tuple(witness.observation):
        raise MalformedWitness('The recorded observation is not the projection of the event sequence.')

    observation = tuple(witness.observation)
    if prop is Property.CSO:
        reach = reach_after(g, g.initial_states, observation)
        return run.end in reach and bool(reach) and reach <= g.secret_states
    if prop is Property.SCSO and run.end not in g.secret_states:
        return False
    if prop in (Property.SISO, Property.ISO) and run.start not in g.secret_states:
        return False
    if prop is Property.ISO:
        return not reach_after(g, g.initial_states - g.secret_states, observation)
    return not safe_after(g, observation)
