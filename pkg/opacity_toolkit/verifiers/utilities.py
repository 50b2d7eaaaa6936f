'''This package contains the checkers of the :mod:`verifiers` app.

The strong properties are decided on a concurrent composition (see :mod:`constructions.utilities`):

* :func:`~verifiers.utilities.check_scso`: no product state of Cc(G, Obs(G_dss)) with a secret left and an EMPTY right
* :func:`~verifiers.utilities.check_siso`: no product state of Cc(Ĝ, Obs(G_dss)) with an EMPTY right
* :func:`~verifiers.utilities.check_inf_sso`: no product state of Cc(G, Obs(G_dss)) with an EMPTY right

The standard properties are decided the usual way:

* :func:`~verifiers.utilities.check_cso`: no current-state estimate of G made of secret states only
* :func:`~verifiers.utilities.check_iso`: as SISO, with an observer of G started from the non-secret initial states and no state deleted

Each checker stops at the first bad state unless exhaustive is set, and extracts a shortest
:class:`~verifiers.models.Witness` when witness is set.
'''

import dataclasses
import functools
import logging
import time
from collections import deque

from automata.models import Run
from constructions.models import EMPTY
from constructions.utilities import build_cc, build_gdss, build_ghat, build_observer
from verifiers.models import Property, Verdict, Witness

logger = logging.getLogger(__name__)


def timed(checker):
    '''Records the wall time of a checker on its verdict.'''

    @functools.wraps(checker)
    def wrapper(g, *args, **kwargs):
        started = time.perf_counter()
        verdict = checker(g, *args, **kwargs)
        verdict = dataclasses.replace(verdict, elapsed=time.perf_counter() - started)
        logger.debug('%s on %s in %.4fs', verdict, g, verdict.elapsed)
        return verdict
    return wrapper


def extract_witness(cc, bad):
    '''This function returns a shortest path of cc to a state satisfying bad, as a :class:`~verifiers.models.Witness`.

    The search is breadth-first from the sorted initial states, moves being tried in event order, so
    ties are broken lexicographically.  A ValueError is raised when no bad state is reachable.
    '''

    parents = {}
    queue = deque()
    for state in cc.initial_states:
        if state not in parents:
            parents[state] = None
            queue.append(state)
    while queue:
        current = queue.popleft()
        if bad(current):
            return _witness_from_path(cc, parents, current)
        for pair, target in cc.outgoing(current):
            if target not in parents:
                parents[target] = (current, pair)
                queue.append(target)
    raise ValueError('No bad state is reachable in %s.' % cc)


def _witness_from_path(cc, parents, state):
    steps = []
    current = state
    while parents[current] is not None:
        previous, pair = parents[current]
        steps.append((pair.event, current.left))
        current = previous
    run = Run(current.left, tuple(reversed(steps)))
    return Witness(event_sequence=run.events, observation=cc.left.project(run.events),
                   offending_state=state, run=run)


def _decide_on_product(prop, left, obs, bad, witness, exhaustive, stats):
    cc = build_cc(left, obs, stop_when=None if exhaustive else bad)
    offending = tuple(state for state in cc.states if bad(state))
    stats.update(product_states=len(cc.states), product_transitions=len(cc.transitions), complete=cc.complete)
    return Verdict(
        property=prop,
        holds=not offending,
        witness=extract_witness(cc, bad) if witness and offending else None,
        stats=stats,
        offending_states=offending if exhaustive else ())


def _observer_stats(gdss, obs):
    return {
        'gdss_states': len(gdss.states),
        'gdss_transitions': len(gdss.transitions),
        'observer_states': len(obs.states),
        'observer_transitions': len(obs.transitions),
    }


@timed
def check_scso(g, witness=False, exhaustive=False):
    '''Strong current-state opacity: no leaking secret state in Cc(G, Obs(G_dss)).'''

    gdss = build_gdss(g)
    obs = build_observer(gdss)
    return _decide_on_product(Property.SCSO, g, obs,
                              lambda state: state.right is EMPTY and state.left in g.secret_states,
                              witness, exhaustive, _observer_stats(gdss, obs))


@timed
def check_siso(g, witness=False, exhaustive=False):
    '''Strong initial-state opacity: no leaking state in Cc(Ĝ, Obs(G_dss)).

    Holds trivially when no initial state is secret, the product then being empty.
    '''

    gdss = build_gdss(g)
    obs = build_observer(gdss)
    ghat = build_ghat(g)
    stats = _observer_stats(gdss, obs)
    stats.update(ghat_states=len(ghat.states), ghat_transitions=len(ghat.transitions))
    return _decide_on_product(Property.SISO, ghat, obs, lambda state: state.right is EMPTY,
                              witness, exhaustive, stats)


@timed
def check_inf_sso(g, witness=False, exhaustive=False):
    '''Strong infinite-step opacity: no product state of Cc(G, Obs(G_dss)) with an EMPTY right component.'''

    gdss = build_gdss(g)
    obs = build_observer(gdss)
    return _decide_on_product(Property.INF_SSO, g, obs, lambda state: state.right is EMPTY,
                              witness, exhaustive, _observer_stats(gdss, obs))


@timed
def check_iso(g, witness=False, exhaustive=False):
    '''Standard initial-state opacity.

    The observer is built on G itself started from the non-secret initial states, without deleting
    secret states, since a matching run only needs the same projection.
    '''

    matching = g.with_initial_states(g.non_secret_initials)
    obs = build_observer(matching)
    ghat = build_ghat(g)
    stats = {
        'observer_states': len(obs.states),
        'observer_transitions': len(obs.transitions),
        'ghat_states': len(ghat.states),
        'ghat_transitions': len(ghat.transitions),
    }
    return _decide_on_product(Property.ISO, ghat, obs, lambda state: state.right is EMPTY,
                              witness, exhaustive, stats)


@timed
def check_cso(g, witness=False, exhaustive=False):
    '''Standard current-state opacity: no reachable estimate of G lies inside the secret states.'''

    estimator = build_observer(g)
    offending = tuple(estimate for estimate in estimator.states if g.secret_states.issuperset(estimate))
    found = None
    if witness and offending:
        found = _estimate_witness(g, estimator, set(offending))
    return Verdict(
        property=Property.CSO,
        holds=not offending,
        witness=found,
        stats={'estimator_states': len(estimator.states), 'estimator_transitions': len(estimator.transitions)},
        offending_states=offending if exhaustive else ())


def _estimate_witness(g, estimator, bad_estimates):
    parents = {estimator.initial: None}
    queue = deque([estimator.initial])
    while queue:
        current = queue.popleft()
        if current in bad_estimates:
            break
        for event in estimator.alphabet:
            target = estimator.step(current, event)
            if target is not None and target not in parents:
                parents[target] = (current, event)
                queue.append(target)
    observation = []
    estimate = current
    while parents[current] is not None:
        current, event = parents[current]
        observation.append(event)
    observation = tuple(reversed(observation))
    run = realize_observation(g, g.initial_states, observation, frozenset(estimate))
    return Witness(event_sequence=run.events, observation=observation, offending_state=estimate, run=run)


def realize_observation(g, starts, observation, ends):
    '''A shortest run of g from starts whose projection is observation and which ends in ends.

    Returns None when there is no such run.
    '''

    origin = {(state, 0): None for state in sorted(starts)}
    queue = deque(origin)
    while queue:
        current = queue.popleft()
        state, position = current
        if position == len(observation) and state in ends:
            steps = []
            while origin[current] is not None:
                previous, event = origin[current]
                steps.append((event, current[0]))
                current = previous
            return Run(current[0], tuple(reversed(steps)))
        for event, target in g.outgoing(state):
            if g.is_observable(event):
                if position == len(observation) or observation[position] != event:
                    continue
                following = (target, position + 1)
            else:
                following = (target, position)
            if following not in origin:
                origin[following] = (current, event)
                queue.append(following)
    return None


CHECKERS = {
    Property.CSO: check_cso,
    Property.ISO: check_iso,
    Property.SCSO: check_scso,
    Property.SISO: check_siso,
    Property.INF_SSO: check_inf_sso,
}


def check(g, prop, witness=False, exhaustive=False):
    '''Checks one :class:`~verifiers.models.Property` on g.'''
    return CHECKERS[Property(prop)](g, witness=witness, exhaustive=exhaustive)
