"""
This package contains the unit tests for the :mod:`oracle` app.

* :class:`~oracle.tests.OracleFixtureTests` decides the recorded systems from the definitions
* :class:`~oracle.tests.SafeSetTests` checks the matching-run sets against a layered search
* :class:`~oracle.tests.ReplayTests` for :func:`~oracle.utilities.replay_witness`
* :class:`~oracle.tests.CampaignTests` runs the seeded campaigns and the **fuzzopacity** command
"""

import itertools
import json
import os
from collections import deque
from dataclasses import replace
from io import StringIO

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from automata.models import Run
from automata.utilities import load_automaton, random_automaton
from constructions.utilities import build_gdss, build_observer
from oracle.campaign import compare, instance_automaton, recorded_verdicts, run_campaign
from oracle.models import MalformedWitness
from oracle.utilities import ORACLES, reach_after, replay_witness, safe_after
from verifiers.models import Property
from verifiers.utilities import check, check_cso

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'automata', 'fixtures')


def fixture(name):
    return os.path.join(FIXTURES, name)


def layered_safe(g, observation):
    '''Non-secret runs from the non-secret initial states, searched over (state, position) pairs.'''

    allowed = g.state_set - g.secret_states
    start = {(state, 0) for state in g.initial_states if state in allowed}
    visited = set(start)
    queue = deque(start)
    while queue:
        state, position = queue.popleft()
        for event, target in g.outgoing(state):
            if target not in allowed:
                continue
            if event in g.unobservable_events:
                following = (target, position)
            elif position < len(observation) and observation[position] == event:
                following = (target, position + 1)
            else:
                continue
            if following not in visited:
                visited.add(following)
                queue.append(following)
    return frozenset(state for state, position in visited if position == len(observation))


class OracleFixtureTests(SimpleTestCase):
    '''This class tests the oracles on the recorded systems.'''

    def test_recorded_verdicts(self):
        '''This tests every oracle against the recorded verdict table.'''

        with open(fixture('verdicts.json')) as verdictfile:
            recorded = json.load(verdictfile)
        for name, verdicts in recorded.items():
            g = load_automaton(fixture(name))
            for prop, holds in verdicts.items():
                self.assertEqual(ORACLES[Property(prop)](g), holds, '%s %s' % (name, prop))

    def test_initial_state_leak_is_not_strongly_infinite_step_opaque(self):
        '''This tests that a secret initial state with an unmatched observation breaks Inf-SSO from the start.'''

        g = load_automaton(fixture('initial_state_leak.json'))
        self.assertFalse(ORACLES[Property.SISO](g))
        self.assertFalse(ORACLES[Property.INF_SSO](g))
        self.assertTrue(ORACLES[Property.SCSO](g))

    def test_recorded_verdicts_loader(self):
        '''This tests that the verdict table is keyed by file name and by property.'''

        recorded = recorded_verdicts()
        self.assertEqual(len(recorded), 6)
        self.assertIs(recorded['current_state_leak.json'][Property.SCSO], False)


class SafeSetTests(SimpleTestCase):
    '''This class tests :func:`~oracle.utilities.safe_after` and :func:`~oracle.utilities.reach_after`.'''

    def test_current_state_leak(self):
        '''This tests the matching-run sets of the current-state leak system.'''

        g = load_automaton(fixture('current_state_leak.json'))
        self.assertEqual(safe_after(g, ()), frozenset(['x0', 'x1']))
        self.assertEqual(safe_after(g, ('a',)), frozenset(['x2', 'x3']))
        self.assertEqual(safe_after(g, ('a', 'a')), frozenset())
        self.assertEqual(reach_after(g, g.initial_states, ('a', 'a')), frozenset(['x5', 'x6']))

    def test_layered_search_agrees(self):
        '''This tests the matching-run sets against a search over (state, position) pairs on random systems.'''

        depth = settings.OPACITY['LANGUAGE_DEPTH']
        for seed in range(100):
            g = random_automaton(seed)
            alphabet = sorted(g.observable_events)
            for length in range(min(depth, 4) + 1):
                for word in itertools.product(alphabet, repeat=length):
                    self.assertEqual(safe_after(g, word), layered_safe(g, word))

    def test_observer_estimates_agree(self):
        '''This tests that the observers reach, along every observation, the sets the oracle computes.'''

        depth = settings.OPACITY['LANGUAGE_DEPTH']
        for seed in range(100):
            g = random_automaton(seed)
            estimator = build_observer(g)
            safe = build_observer(build_gdss(g))
            self.assertEqual(check_cso(g).stats['estimator_states'], len(estimator.states))
            alphabet = sorted(g.observable_events)
            for length in range(min(depth, 4) + 1):
                for word in itertools.product(alphabet, repeat=length):
                    estimate = estimator.run(word)
                    self.assertEqual(reach_after(g, g.initial_states, word),
                                     frozenset(estimate) if estimate is not None else frozenset())
                    if estimate is not None:
                        self.assertIn(estimate, estimator.states)
                    estimate = safe.run(word)
                    self.assertEqual(safe_after(g, word),
                                     frozenset(estimate) if estimate is not None else frozenset())


class ReplayTests(SimpleTestCase):
    '''This class tests :func:`~oracle.utilities.replay_witness`.'''

    def test_fixture_witnesses_replay(self):
        '''This tests that every failing verdict on the recorded systems has a replayable witness.'''

        for name, verdicts in recorded_verdicts().items():
            g = load_automaton(fixture(name))
            for prop, holds in verdicts.items():
                if holds:
                    continue
                verdict = check(g, prop, witness=True)
                self.assertTrue(replay_witness(g, verdict.witness, prop), '%s %s' % (name, prop))

    def test_broken_run(self):
        '''This tests that a run using a missing transition is malformed.'''

        g = load_automaton(fixture('current_state_leak.json'))
        witness = check(g, Property.SCSO, witness=True).witness
        broken = replace(witness, run=Run('x0', (('a', 'x5'),)), event_sequence=('a',), observation=('a',))
        with self.assertRaises(MalformedWitness):
            replay_witness(g, broken, Property.SCSO)

    def test_wrong_observation(self):
        '''This tests that an observation which is not the projection of the run is malformed.'''

        g = load_automaton(fixture('current_state_leak.json'))
        witness = check(g, Property.SCSO, witness=True).witness
        with self.assertRaises(MalformedWitness):
            replay_witness(g, replace(witness, observation=('a',)), Property.SCSO)

    def test_not_from_initial_state(self):
        '''This tests that a run starting outside X0 is malformed.'''

        g = load_automaton(fixture('current_state_leak.json'))
        witness = check(g, Property.SCSO, witness=True).witness
        shifted = replace(witness, run=Run('x4', (('a', 'x5'),)), event_sequence=('a',), observation=('a',))
        with self.assertRaises(MalformedWitness):
            replay_witness(g, shifted, Property.SCSO)

    def test_run_without_violation(self):
        '''This tests that a valid run which is matched by a non-secret run is not a violation.'''

        g = load_automaton(fixture('current_state_leak.json'))
        witness = check(g, Property.SCSO, witness=True).witness
        harmless = replace(witness, run=Run('x0', (('a', 'x2'),)), event_sequence=('a',), observation=('a',))
        self.assertFalse(replay_witness(g, harmless, Property.SCSO))
        self.assertFalse(replay_witness(g, harmless, Property.INF_SSO))

    def test_siso_needs_secret_start(self):
        '''This tests that a SISO violation must start at a secret initial state.'''

        g = load_automaton(fixture('initial_secret_branch.json'))
        witness = check(g, Property.SISO, witness=True).witness
        other = replace(witness, run=Run('x0', (('a', 'x2'),)), event_sequence=('a',), observation=('a',))
        self.assertFalse(replay_witness(g, other, Property.SISO))
        self.assertTrue(replay_witness(g, witness, Property.ISO))


class CampaignTests(SimpleTestCase):
    '''This class tests :func:`~oracle.campaign.run_campaign` and the **fuzzopacity** command.'''

    def test_campaign_has_no_discrepancy(self):
        '''This tests that checkers, oracles, witnesses and implications agree on the configured campaign.'''

        count = settings.OPACITY['FUZZ_COUNT']
        report = run_campaign(count, settings.OPACITY['FUZZ_MAX_STATES'], settings.OPACITY['FUZZ_MAX_EVENTS'],
                              seed=settings.OPACITY['DEFAULT_SEED'])
        self.assertEqual(report.discrepancies, [])
        self.assertEqual(report.instances, count)
        for prop in Property:
            self.assertEqual(report.holds[prop] + report.fails[prop], count)
        self.assertGreater(report.fails[Property.SCSO], 0)
        self.assertGreater(report.holds[Property.SCSO], 0)

    def test_empty_campaign(self):
        '''This tests that a campaign of no instance is an empty, successful report.'''

        report = run_campaign(0, 6, 4)
        self.assertTrue(report.ok)
        self.assertEqual(report.instances, 0)

    def test_fixtures_match_recorded_verdicts(self):
        '''This tests that the recorded systems pass the campaign checks.'''

        report = run_campaign(0, 6, 4, fixtures=True)
        self.assertEqual(report.discrepancies, [])
        self.assertEqual(report.instances, 6)

    def test_discrepancy_is_reported(self):
        '''This tests that a wrong recorded verdict is reported.'''

        g = load_automaton(fixture('current_state_leak.json'))
        result = compare(g, 'current_state_leak.json', {Property.SCSO: True})
        self.assertEqual(len(result.discrepancies), 1)
        self.assertIn('SCSO', result.discrepancies[0])

    def test_deterministic(self):
        '''This tests that the same parameters give the same report.'''

        first = run_campaign(40, 5, 3, seed=7)
        second = run_campaign(40, 5, 3, seed=7)
        self.assertEqual(first.lines(), second.lines())
        self.assertEqual(instance_automaton(7, 5, 3), instance_automaton(7, 5, 3))

    def test_workers_give_the_serial_report(self):
        '''This tests that spreading instances over processes changes nothing.'''

        serial = run_campaign(20, 5, 3, seed=3)
        parallel = run_campaign(20, 5, 3, seed=3, workers=2)
        self.assertEqual(serial.lines(), parallel.lines())

    def test_command(self):
        '''This tests the report printed by the command and its zero exit status.'''

        out = StringIO()
        call_command('fuzzopacity', count=25, max_states=4, max_events=3, seed=1, fixtures=True, stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], '31 instances')
        self.assertEqual(lines[-1], '0 discrepancies')

    def test_command_zero_count(self):
        '''This tests that a zero count gives an empty report.'''

        out = StringIO()
        call_command('fuzzopacity', count=0, stdout=out)
        self.assertIn('0 instances', out.getvalue())

    def test_command_bad_parameters(self):
        '''This tests that a negative count is an input error.'''

        with self.assertRaises(CommandError) as raised:
            call_command('fuzzopacity', count=-1, stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 2)
