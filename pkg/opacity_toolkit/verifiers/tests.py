"""
This package contains the unit tests for the :mod:`verifiers` app.

* :class:`~verifiers.tests.FixtureVerdictTests` checks the recorded systems
* :class:`~verifiers.tests.WitnessTests` for witness extraction
* :class:`~verifiers.tests.VerdictTests` for the result objects
* :class:`~verifiers.tests.CheckCommandTests` for the **checkopacity** command
"""

import json
import os
import tempfile
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from automata.models import Run
from automata.utilities import load_automaton, random_automaton
from constructions.models import EMPTY, CCState
from constructions.utilities import build_cc, build_gdss, build_observer
from verifiers.models import Property, Verdict
from verifiers.utilities import (check, check_cso, check_inf_sso, check_iso, check_scso, check_siso,
                                 extract_witness, realize_observation)

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'automata', 'fixtures')
GOLDEN = os.path.join(os.path.dirname(__file__), 'fixtures', 'current_state_leak.machine.jsonl')


def fixture(name):
    return os.path.join(FIXTURES, name)


class FixtureVerdictTests(SimpleTestCase):
    '''This class tests the verdicts of the checkers on the recorded systems.'''

    def test_current_state_leak(self):
        '''This tests that the system is CSO but not SCSO, leaking through (x5,{}) after aa.'''

        g = load_automaton(fixture('current_state_leak.json'))
        self.assertTrue(check_cso(g).holds)
        verdict = check_scso(g, witness=True, exhaustive=True)
        self.assertFalse(verdict.holds)
        self.assertEqual(verdict.offending_states, (CCState('x5', EMPTY),))
        self.assertEqual(verdict.witness.observation, ('a', 'a'))
        self.assertEqual(verdict.witness.offending_state, CCState('x5', EMPTY))
        self.assertEqual(str(verdict.witness.run), 'x0 -a-> x4 -a-> x5')

    def test_initial_state_leak(self):
        '''This tests that the system is ISO and SCSO but not SISO.'''

        g = load_automaton(fixture('initial_state_leak.json'))
        self.assertTrue(check_iso(g).holds)
        self.assertTrue(check_scso(g).holds)
        verdict = check_siso(g, witness=True)
        self.assertFalse(verdict.holds)
        self.assertEqual(verdict.witness.observation, ('a',))
        self.assertEqual(verdict.witness.run.start, 'x2')

    def test_strongly_current_state_opaque(self):
        '''This tests that the system is SCSO and strongly infinite-step opaque.'''

        g = load_automaton(fixture('strongly_current_state_opaque.json'))
        self.assertTrue(check_scso(g).holds)
        self.assertTrue(check_inf_sso(g).holds)

    def test_strongly_initial_state_opaque(self):
        '''This tests that the system is SISO but neither SCSO nor CSO.'''

        g = load_automaton(fixture('strongly_initial_state_opaque.json'))
        self.assertTrue(check_siso(g).holds)
        self.assertFalse(check_scso(g).holds)
        verdict = check_cso(g, witness=True)
        self.assertFalse(verdict.holds)
        self.assertEqual(verdict.witness.offending_state, ('x2',))
        self.assertEqual(str(verdict.witness.run), 'x1 -b-> x2')

    def test_initial_secret_branch(self):
        '''This tests that the system is not SISO, with exactly two leaking states and a one-event witness.'''

        g = load_automaton(fixture('initial_secret_branch.json'))
        verdict = check_siso(g, witness=True, exhaustive=True)
        self.assertFalse(verdict.holds)
        self.assertEqual(set(verdict.offending_states), {CCState('x4', EMPTY), CCState('x5', EMPTY)})
        self.assertEqual(verdict.witness.observation, ('b',))
        self.assertEqual(verdict.witness.event_sequence, ('b',))
        self.assertFalse(check_iso(g).holds)

    def test_secret_free(self):
        '''This tests that every property holds without secret states.'''

        g = load_automaton(fixture('secret_free.json'))
        for prop in Property:
            self.assertTrue(check(g, prop).holds)

    def test_recorded_verdicts(self):
        '''This tests every fixture against the recorded verdict table.'''

        with open(fixture('verdicts.json')) as verdictfile:
            recorded = json.load(verdictfile)
        for name, verdicts in recorded.items():
            g = load_automaton(fixture(name))
            for prop, holds in verdicts.items():
                self.assertEqual(check(g, prop).holds, holds, '%s %s' % (name, prop))

    def test_short_circuit_agrees_with_exhaustive(self):
        '''This tests that stopping early never changes a verdict.'''

        for seed in range(50):
            g = random_automaton(seed, states=6, events=3)
            for prop in Property:
                self.assertEqual(check(g, prop).holds, check(g, prop, exhaustive=True).holds)

    def test_larger_systems_are_quick(self):
        '''This tests that systems with ten states are checked in well under five seconds.'''

        for seed in range(3):
            g = random_automaton(seed, states=10, events=4, density=0.15)
            for prop in Property:
                self.assertLess(check(g, prop, witness=True).elapsed, 5.0)


class WitnessTests(SimpleTestCase):
    '''This class tests :func:`~verifiers.utilities.extract_witness` and :func:`~verifiers.utilities.realize_observation`.'''

    def test_no_bad_state(self):
        '''This tests that asking for a witness without a bad state raises.'''

        g = load_automaton(fixture('strongly_current_state_opaque.json'))
        cc = build_cc(g, build_observer(build_gdss(g)))
        with self.assertRaises(ValueError):
            extract_witness(cc, lambda state: state.right is EMPTY)

    def test_witness_replays(self):
        '''This tests that the witness of a failing check is a run of the system with the recorded observation.'''

        g = load_automaton(fixture('current_state_leak.json'))
        witness = check_inf_sso(g, witness=True).witness
        self.assertTrue(witness.run.is_valid_in(g))
        self.assertEqual(g.project(witness.event_sequence), witness.observation)

    def test_realize_observation(self):
        '''This tests shortest runs with a given observation.'''

        g = load_automaton(fixture('current_state_leak.json'))
        self.assertEqual(realize_observation(g, {'x0'}, ('a', 'a'), {'x5'}),
                         Run('x0', (('a', 'x4'), ('a', 'x5'))))
        self.assertEqual(realize_observation(g, {'x0'}, ('a', 'a'), {'x6'}),
                         Run('x0', (('u', 'x1'), ('a', 'x5'), ('a', 'x6'))))
        self.assertIsNone(realize_observation(g, {'x0'}, ('b',), set(g.states)))


class VerdictTests(SimpleTestCase):
    '''This class tests :class:`~verifiers.models.Verdict` and :class:`~verifiers.models.Property`.'''

    def test_property_names(self):
        '''This tests the command-line names and labels of the properties.'''

        self.assertEqual(Property('inf-sso'), Property.INF_SSO)
        self.assertEqual(Property.INF_SSO.label, 'INF-SSO')
        self.assertEqual(str(Property.SCSO), 'scso')

    def test_record_is_stable(self):
        '''This tests that wall time is left out of the record.'''

        g = load_automaton(fixture('current_state_leak.json'))
        first = check_scso(g, witness=True)
        second = check_scso(g, witness=True)
        self.assertNotIn('elapsed', first.as_record())
        self.assertEqual(first.as_record(), second.as_record())
        self.assertEqual(first, second)

    def test_str(self):
        '''This tests the one-line summary of a verdict.'''

        self.assertEqual(str(Verdict(property=Property.SISO, holds=False)), 'SISO fails')
        self.assertEqual(str(Verdict(property=Property.CSO, holds=True)), 'CSO holds')

    def test_witness_only_on_request(self):
        '''This tests that no witness is extracted unless asked for.'''

        g = load_automaton(fixture('current_state_leak.json'))
        self.assertIsNone(check_scso(g).witness)
        self.assertIsNone(check_cso(g, witness=True).witness)


class CheckCommandTests(SimpleTestCase):
    '''This class tests the **checkopacity** command and its exit statuses.'''

    def run_check(self, name, **options):
        out = StringIO()
        try:
            call_command('checkopacity', fixture(name), stdout=out, **options)
        except SystemExit as stopped:
            return stopped.code, out.getvalue()
        return 0, out.getvalue()

    def test_failing_property_exits_one(self):
        '''This tests that CSO holds and SCSO fails on the current-state leak system, with status 1.'''

        status, output = self.run_check('current_state_leak.json', properties='cso,scso')
        self.assertEqual(status, 1)
        lines = output.splitlines()
        self.assertTrue(lines[0].startswith('CSO holds'))
        self.assertTrue(lines[1].startswith('SCSO fails'))

    def test_all_hold_exits_zero(self):
        '''This tests that all properties hold without secrets, with status 0.'''

        status, output = self.run_check('secret_free.json')
        self.assertEqual(status, 0)
        self.assertEqual(output.count('holds'), 5)

    def test_witness_output(self):
        '''This tests the human-readable witness of the branching system.'''

        status, output = self.run_check('initial_secret_branch.json', properties='siso', witness=True)
        self.assertEqual(status, 1)
        self.assertIn('observation: b', output)
        self.assertIn('run: x1 -b-> x4', output)

    def test_all_leaks(self):
        '''This tests that --all-leaks lists both leaking states.'''

        status, output = self.run_check('initial_secret_branch.json', properties='siso', all_leaks=True)
        self.assertEqual(status, 1)
        self.assertIn('offending states: (x4,{}) (x5,{})', output)

    def test_machine_output_matches_golden_file(self):
        '''This tests the machine-readable records against the golden file.'''

        status, output = self.run_check('current_state_leak.json', properties='cso,scso', witness=True,
                                        output='machine')
        self.assertEqual(status, 1)
        with open(GOLDEN) as goldenfile:
            self.assertEqual(output, goldenfile.read())

    def test_unknown_property(self):
        '''This tests that an unknown property is an input error.'''

        with self.assertRaises(CommandError) as raised:
            self.run_check('current_state_leak.json', properties='cso,xyz')
        self.assertEqual(raised.exception.returncode, 2)

    def test_unknown_output(self):
        '''This tests that an unknown output format is an input error.'''

        with self.assertRaises(CommandError) as raised:
            self.run_check('current_state_leak.json', output='xml')
        self.assertEqual(raised.exception.returncode, 2)

    def test_missing_file(self):
        '''This tests that a missing file is an input error.'''

        with self.assertRaises(CommandError) as raised:
            self.run_check('missing.json')
        self.assertEqual(raised.exception.returncode, 2)

    def test_invalid_file(self):
        '''This tests that a malformed file is an input error mentioning the position.'''

        with tempfile.NamedTemporaryFile('w', suffix='.json', delete=False) as broken:
            broken.write('{"format_version": 1,\n "states": [}')
        try:
            with self.assertRaises(CommandError) as raised:
                call_command('checkopacity', broken.name, stdout=StringIO())
        finally:
            os.unlink(broken.name)
        self.assertEqual(raised.exception.returncode, 2)
        self.assertIn('line 2', str(raised.exception))
