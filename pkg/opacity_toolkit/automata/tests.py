"""
This package contains the unit tests for the :mod:`automata` app.

There are tests for the file format and the automaton model:

* :class:`~automata.tests.DocumentTests`
* :class:`~automata.tests.ValidateTests`
* :class:`~automata.tests.AutomatonTests`
* :class:`~automata.tests.AutomatonPropertyTests`
* :class:`~automata.tests.RandomAutomatonTests`
* :class:`~automata.tests.DotExportTests`
* :class:`~automata.tests.GenerateCommandTests`
"""

import json
import os
import tempfile
from io import StringIO

import pydot
from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from automata.models import Automaton, AutomatonDocument, Run, validate
from automata.utilities import (document_from_automaton, export_dot, load_automaton, parse, random_automaton,
                                serialize)

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def fixture(name):
    return os.path.join(FIXTURES, name)


def minimal(**changes):
    '''A small valid automaton file as a dict, with some keys replaced.'''
    raw = {
        'format_version': 1,
        'states': ['x0', 'x1'],
        'events': [{'name': 'a', 'observable': True}, {'name': 'u', 'observable': False}],
        'transitions': [['x0', 'a', 'x1'], ['x1', 'u', 'x0']],
        'initial': ['x0'],
        'secret': ['x1'],
    }
    raw.update(changes)
    return raw


class DocumentTests(SimpleTestCase):
    '''This class tests :func:`~automata.utilities.parse` and :func:`~automata.utilities.serialize`.'''

    def test_serialize_canonical_fixture_is_identity(self):
        '''This tests that a file already in canonical form is written back byte for byte.'''

        with open(fixture('current_state_leak.json'), 'rb') as inputfile:
            content = inputfile.read()
        self.assertEqual(serialize(parse(content)), content)

    def test_parse_serialize_is_identity(self):
        '''This tests that every fixture survives a write and a read unchanged.'''

        for name in sorted(os.listdir(FIXTURES)):
            if name == 'verdicts.json':
                continue
            with open(fixture(name), 'rb') as inputfile:
                document = parse(inputfile.read())
            self.assertEqual(parse(serialize(document)), document)

    def test_order_of_entries_is_irrelevant(self):
        '''This tests that documents differing only in list order are equal.'''

        shuffled = minimal(states=['x1', 'x0'], transitions=[['x1', 'u', 'x0'], ['x0', 'a', 'x1']],
                           events=[{'name': 'u', 'observable': False}, {'name': 'a', 'observable': True}])
        self.assertEqual(parse(json.dumps(shuffled)), parse(json.dumps(minimal())))

    def test_serialize_key_order(self):
        '''This tests that keys are written in their fixed order.'''

        text = serialize(parse(json.dumps(minimal()))).decode('utf-8')
        positions = [text.index('"%s"' % key) for key in
                     ('format_version', 'states', 'events', 'transitions', 'initial', 'secret')]
        self.assertEqual(positions, sorted(positions))
        self.assertTrue(text.endswith('\n'))

    def test_syntax_error_has_position(self):
        '''This tests that a JSON syntax error reports its line and column.'''

        with self.assertRaises(ValidationError) as raised:
            parse('{\n  "format_version": 1,\n  "states": [x0]\n}')
        self.assertEqual(raised.exception.code, 'syntax')
        self.assertEqual(raised.exception.params['line'], 3)
        self.assertEqual(raised.exception.params['column'], 14)
        self.assertIn('line 3', raised.exception.messages[0])

    def test_not_an_object(self):
        '''This tests that a JSON list is refused.'''

        with self.assertRaises(ValidationError):
            parse('[1, 2]')

    def test_unknown_key(self):
        '''This tests that an unexpected key is refused.'''

        with self.assertRaises(ValidationError) as raised:
            parse(json.dumps(minimal(colour='red')))
        self.assertIn('colour', raised.exception.messages[0])

    def test_version_mismatch(self):
        '''This tests that another format version is refused.'''

        with self.assertRaises(ValidationError) as raised:
            parse(json.dumps(minimal(format_version=2)))
        self.assertIn('Format version 2', raised.exception.messages[0])

    def test_duplicate_state(self):
        '''This tests that a state declared twice is refused.'''

        with self.assertRaises(ValidationError) as raised:
            parse(json.dumps(minimal(states=['x0', 'x1', 'x0'])))
        self.assertIn('Duplicate state x0', raised.exception.messages[0])

    def test_duplicate_transition(self):
        '''This tests that a transition listed twice is refused.'''

        with self.assertRaises(ValidationError):
            parse(json.dumps(minimal(transitions=[['x0', 'a', 'x1'], ['x0', 'a', 'x1']])))

    def test_unknown_state_in_transition(self):
        '''This tests that a transition to an undeclared state is refused.'''

        with self.assertRaises(ValidationError) as raised:
            parse(json.dumps(minimal(transitions=[['x0', 'a', 'x9']])))
        self.assertIn('unknown state', raised.exception.messages[0])

    def test_unknown_event_in_transition(self):
        '''This tests that a transition with an undeclared event is refused.'''

        with self.assertRaises(ValidationError) as raised:
            parse(json.dumps(minimal(transitions=[['x0', 'b', 'x1']])))
        self.assertIn('unknown event', raised.exception.messages[0])

    def test_unknown_secret_state(self):
        '''This tests that an undeclared secret state is refused.'''

        with self.assertRaises(ValidationError):
            parse(json.dumps(minimal(secret=['x7'])))

    def test_observable_flag_must_be_boolean(self):
        '''This tests that the observable flag is a JSON boolean.'''

        with self.assertRaises(ValidationError):
            parse(json.dumps(minimal(events=[{'name': 'a', 'observable': 1}, {'name': 'u', 'observable': False}])))

    def test_names_without_whitespace(self):
        '''This tests that state names with whitespace are refused.'''

        with self.assertRaises(ValidationError):
            parse(json.dumps(minimal(states=['x0', 'x 1'])))

    def test_document_from_automaton(self):
        '''This tests that a validated automaton gives back the document it came from.'''

        document = parse(json.dumps(minimal()))
        self.assertEqual(document_from_automaton(validate(document)), document)

    def test_array_inside_string(self):
        '''This tests that a list written as a JSON string is refused rather than decoded again.'''

        with self.assertRaises(ValidationError) as raised:
            parse(json.dumps(minimal(states='["x0", "x1"]')))
        self.assertIn('Expected a JSON array', raised.exception.messages[0])
        with self.assertRaises(ValidationError):
            parse(json.dumps(minimal(transitions='[]')))

    def test_version_must_be_an_integer(self):
        '''This tests that a format version given as a string, a float or a boolean is refused.'''

        for version in ('1', 1.0, True):
            with self.assertRaises(ValidationError) as raised:
                parse(json.dumps(minimal(format_version=version)))
            self.assertIn('Expected a JSON integer', raised.exception.messages[0])

    def test_missing_version(self):
        '''This tests that the format version is required.'''

        raw = minimal()
        del raw['format_version']
        with self.assertRaises(ValidationError):
            parse(json.dumps(raw))

    def test_invalid_utf8(self):
        '''This tests that undecodable bytes are a syntax error with their position.'''

        content = json.dumps(minimal()).encode('utf-8') + b'\xff'
        with self.assertRaises(ValidationError) as raised:
            parse(content)
        self.assertEqual(raised.exception.code, 'syntax')
        self.assertEqual(raised.exception.params['position'], len(content) - 1)

    def test_random_documents_round_trip(self):
        '''This tests that a thousand generated documents are written back byte for byte and load back unchanged.'''

        for seed in range(1000):
            g = random_automaton(seed, states=1 + seed % 6, events=1 + seed % 4, secret_ratio=(seed % 5) / 4)
            content = serialize(document_from_automaton(g))
            document = parse(content)
            self.assertEqual(serialize(document), content)
            self.assertEqual(validate(document), g)
            raw = json.loads(content)
            for key in ('states', 'events', 'transitions', 'initial', 'secret'):
                raw[key].reverse()
            self.assertEqual(parse(json.dumps(raw)), document)


class ValidateTests(SimpleTestCase):
    '''This class tests :func:`~automata.models.validate`.'''

    def test_empty_state_set(self):
        '''This tests that an automaton without states is refused.'''

        with self.assertRaises(ValidationError) as raised:
            validate(AutomatonDocument(format_version=1))
        self.assertEqual(raised.exception.code, 'empty')

    def test_event_in_both_partitions(self):
        '''This tests that an event may not be both observable and unobservable.'''

        document = AutomatonDocument(format_version=1, states=['x0'], events=[('a', True), ('a', False)],
                                     initial=['x0'])
        with self.assertRaises(ValidationError) as raised:
            validate(document)
        self.assertEqual(raised.exception.code, 'partition')

    def test_unknown_reference(self):
        '''This tests that a document built directly is still checked for undeclared states.'''

        document = AutomatonDocument(format_version=1, states=['x0'], events=[('a', True)],
                                     transitions=[('x0', 'a', 'x1')], initial=['x0'])
        with self.assertRaises(ValidationError):
            validate(document)

    def test_no_initial_state(self):
        '''This tests that an automaton without a reachable state is refused.'''

        with self.assertRaises(ValidationError):
            validate(AutomatonDocument(format_version=1, states=['x0'], events=[('a', True)]))

    def test_unreachable_states_are_pruned(self):
        '''This tests that unreachable states are removed with a warning.'''

        document = parse(json.dumps(minimal(states=['x0', 'x1', 'x2', 'x3'],
                                            transitions=[['x0', 'a', 'x1'], ['x2', 'a', 'x3']])))
        with self.assertLogs('automata.models', 'WARNING') as logs:
            aut = validate(document)
        self.assertEqual(aut.states, ('x0', 'x1'))
        self.assertEqual(aut.pruned_states, ('x2', 'x3'))
        self.assertEqual(aut.transitions, (('x0', 'a', 'x1'),))
        self.assertIn('x2, x3', logs.output[0])

    def test_all_secret_warns(self):
        '''This tests that X_S = X is accepted with a warning.'''

        document = parse(json.dumps(minimal(secret=['x0', 'x1'])))
        with self.assertLogs('automata.models', 'WARNING') as logs:
            aut = validate(document)
        self.assertEqual(aut.secret_states, frozenset(['x0', 'x1']))
        self.assertIn('Every state is secret', logs.output[0])


class AutomatonTests(SimpleTestCase):
    '''This class tests the operations of :class:`~automata.models.Automaton` on a system leaking its current state.'''

    def setUp(self):
        self.g = load_automaton(fixture('current_state_leak.json'))

    def test_unobservable_reach(self):
        '''This tests the unobservable reach of the initial state.'''

        self.assertEqual(self.g.unobservable_reach({'x0'}), frozenset(['x0', 'x1']))
        self.assertEqual(self.g.unobservable_reach(set()), frozenset())

    def test_delta_extended(self):
        '''This tests the extended transition function, which applies no closure.'''

        self.assertEqual(self.g.delta_extended({'x0'}, ['a', 'a']), frozenset(['x5']))
        self.assertEqual(self.g.delta_extended({'x0'}, ['u', 'a', 'a']), frozenset(['x6']))
        self.assertEqual(self.g.delta_extended({'x0'}, []), frozenset(['x0']))
        self.assertEqual(self.g.delta_extended({'x0'}, ['b']), frozenset())

    def test_delta_extended_unknown_event(self):
        '''This tests that an event outside the alphabet is an error.'''

        with self.assertRaises(ValueError):
            self.g.delta_extended({'x0'}, ['z'])

    def test_project(self):
        '''This tests that projection erases the unobservable events only.'''

        self.assertEqual(self.g.project(['u', 'a', 'u', 'b']), ('a', 'b'))
        self.assertEqual(self.g.project(['u']), ())
        self.assertEqual(self.g.project([]), ())

    def test_partition(self):
        '''This tests the observable and unobservable event sets.'''

        self.assertEqual(self.g.observable_events, frozenset(['a', 'b']))
        self.assertEqual(self.g.unobservable_events, frozenset(['u']))
        self.assertFalse(self.g.observable_events & self.g.unobservable_events)

    def test_enumerate_runs_order(self):
        '''This tests that runs come out by length, then by event names.'''

        runs = list(self.g.enumerate_runs(1))
        self.assertEqual([str(run) for run in runs], ['x0', 'x0 -a-> x2', 'x0 -a-> x4', 'x0 -u-> x1'])

    def test_enumerate_runs_negative(self):
        '''This tests that a negative bound is refused.'''

        with self.assertRaises(ValueError):
            list(self.g.enumerate_runs(-1))

    def test_run_helpers(self):
        '''This tests the accessors and the validity checks of a :class:`~automata.models.Run`.'''

        run = Run('x0').extended('u', 'x1').extended('a', 'x5')
        self.assertEqual(run.events, ('u', 'a'))
        self.assertEqual(run.states, ('x0', 'x1', 'x5'))
        self.assertEqual(run.end, 'x5')
        self.assertEqual(len(run), 2)
        self.assertTrue(run.is_valid_in(self.g))
        self.assertFalse(run.is_non_secret_in(self.g))
        self.assertTrue(Run('x0', (('u', 'x1'),)).is_non_secret_in(self.g))
        self.assertFalse(Run('x0', (('a', 'x1'),)).is_valid_in(self.g))
        self.assertFalse(Run('x9').is_valid_in(self.g))

    def test_is_observable_unknown(self):
        '''This tests that asking about an unknown event raises.'''

        with self.assertRaises(ValueError):
            self.g.is_observable('z')


class AutomatonPropertyTests(SimpleTestCase):
    '''This class checks algebraic properties of the basic operations on seeded random automata.'''

    def setUp(self):
        self.automata = [random_automaton(seed) for seed in range(30)]
        self.depth = settings.OPACITY['LANGUAGE_DEPTH']

    def test_projection_is_a_morphism(self):
        '''This tests that P(s1 s2) = P(s1) P(s2).'''

        for g in self.automata:
            names = g.event_names
            for first in names:
                for second in names:
                    for third in names:
                        self.assertEqual(g.project([first, second, third]),
                                         g.project([first]) + g.project([second, third]))

    def test_delta_composes(self):
        '''This tests that delta(x, s1 s2) = delta(delta(x, s1), s2) along enumerated runs.'''

        for g in self.automata:
            for run in g.enumerate_runs(min(self.depth, 3)):
                events = run.events
                for cut in range(len(events) + 1):
                    whole = g.delta_extended({run.start}, events)
                    staged = g.delta_extended(g.delta_extended({run.start}, events[:cut]), events[cut:])
                    self.assertEqual(whole, staged)
                    self.assertIn(run.end, whole)

    def test_unobservable_reach_is_a_closure(self):
        '''This tests that the unobservable reach is extensive, idempotent and monotone.'''

        for g in self.automata:
            for state in g.states:
                reach = g.unobservable_reach({state})
                self.assertIn(state, reach)
                self.assertEqual(g.unobservable_reach(reach), reach)
                for other in g.states:
                    self.assertTrue(reach <= g.unobservable_reach({state, other}))

    def test_unobservable_reach_is_the_least_fixpoint(self):
        '''This tests the unobservable reach against a fixpoint over the transition list.'''

        for g in self.automata:
            for state in g.states:
                reached = {state}
                changed = True
                while changed:
                    changed = False
                    for source, event, target in g.transitions:
                        if source in reached and event in g.unobservable_events and target not in reached:
                            reached.add(target)
                            changed = True
                self.assertEqual(g.unobservable_reach({state}), frozenset(reached))

    def test_run_count(self):
        '''This tests the number of enumerated runs against a recursive count of paths.'''

        def paths(g, state, steps):
            if steps == 0:
                return 1
            return 1 + sum(paths(g, target, steps - 1) for source, _, target in g.transitions if source == state)

        for g in self.automata:
            runs = list(g.enumerate_runs(self.depth))
            self.assertEqual(len(runs), sum(paths(g, state, self.depth) for state in g.initial_states))
            self.assertEqual(len(set(runs)), len(runs))

    def test_enumerated_runs_are_valid(self):
        '''This tests that every enumerated run replays and starts at an initial state.'''

        for g in self.automata:
            for run in g.enumerate_runs(self.depth):
                self.assertTrue(run.is_valid_in(g))
                self.assertIn(run.start, g.initial_states)
                self.assertLessEqual(len(run), self.depth)


class RandomAutomatonTests(SimpleTestCase):
    '''This class tests :func:`~automata.utilities.random_automaton`.'''

    def test_same_seed_same_bytes(self):
        '''This tests that generation is determined by its seed.'''

        first = serialize(document_from_automaton(random_automaton(42, states=5)))
        second = serialize(document_from_automaton(random_automaton(42, states=5)))
        self.assertEqual(first, second)

    def test_different_seeds_differ(self):
        '''This tests that the seed is actually used.'''

        generated = {serialize(document_from_automaton(random_automaton(seed, states=6))) for seed in range(10)}
        self.assertGreater(len(generated), 1)

    def test_secret_ratio_zero(self):
        '''This tests that a zero secret ratio gives no secret state.'''

        self.assertEqual(random_automaton(7, secret_ratio=0).secret_states, frozenset())

    def test_sizes(self):
        '''This tests the requested numbers of states and events.'''

        g = random_automaton(3, states=8, events=4, obs_ratio=0.5)
        self.assertEqual(len(g.states), 8)
        self.assertEqual(len(g.events), 4)
        self.assertEqual(len(g.observable_events), 2)

    def test_generation_never_prunes(self):
        '''This tests that a thousand generated automata validate without pruning.'''

        for seed in range(1000):
            g = random_automaton(seed, states=1 + seed % 6, events=1 + seed % 4)
            self.assertEqual(g.pruned_states, ())
            self.assertEqual(len(g.states), 1 + seed % 6)

    def test_bad_parameters(self):
        '''This tests that out of range parameters are refused.'''

        with self.assertRaises(ValueError):
            random_automaton(0, states=0)
        with self.assertRaises(ValueError):
            random_automaton(0, density=1.5)


class DotExportTests(SimpleTestCase):
    '''This class tests :func:`~automata.utilities.export_dot` for systems.'''

    def test_parses_as_dot(self):
        '''This tests that the output is a DOT digraph with one node per state plus the entry point.'''

        g = load_automaton(fixture('current_state_leak.json'))
        graphs = pydot.graph_from_dot_data(export_dot(g))
        self.assertEqual(len(graphs), 1)
        graph = graphs[0]
        self.assertEqual(graph.get_type(), 'digraph')
        names = {node.get_name() for node in graph.get_nodes()}
        self.assertTrue({'s0', 's1', 's2', 's3', 's4', 's5', 's6', 'init0'} <= names)
        self.assertEqual(len(graph.get_edges()), len(g.transitions) + 1)

    def test_secret_states_have_double_border(self):
        '''This tests that x4 is drawn with two peripheries.'''

        g = load_automaton(fixture('current_state_leak.json'))
        graph = pydot.graph_from_dot_data(export_dot(g))[0]
        self.assertEqual(str(graph.get_node('s4')[0].get('peripheries')), '2')
        self.assertIsNone(graph.get_node('s0')[0].get('peripheries'))

    def test_deterministic(self):
        '''This tests that two exports are identical.'''

        g = load_automaton(fixture('initial_secret_branch.json'))
        self.assertEqual(export_dot(g), export_dot(g))

    def test_backslash_and_quote_in_names(self):
        '''This tests that names holding a backslash or a double quote still give valid DOT.'''

        document = parse(json.dumps(minimal(states=['x0', 'x\\', 'y"'],
                                            transitions=[['x0', 'a', 'x\\'], ['x\\', 'u', 'y"']],
                                            secret=['y"'])))
        text = export_dot(validate(document))
        self.assertIn('label="x\\\\"', text)
        self.assertIn('label="y\\""', text)
        graphs = pydot.graph_from_dot_data(text)
        self.assertIsNotNone(graphs)
        circles = [node for node in graphs[0].get_nodes() if node.get('shape') == 'circle']
        self.assertEqual(len(circles), 3)
        self.assertEqual(len(graphs[0].get_edges()), 3)

    def test_no_edge_keys(self):
        '''This tests that edges carry no multigraph key attribute.'''

        text = export_dot(load_automaton(fixture('current_state_leak.json')))
        self.assertNotIn('key=', text)
        for edge in pydot.graph_from_dot_data(text)[0].get_edges():
            self.assertIsNone(edge.get('key'))

    def test_empty_automaton(self):
        '''This tests that an automaton without states exports as an empty digraph.'''

        graphs = pydot.graph_from_dot_data(export_dot(Automaton.build([], [], [], [], [])))
        self.assertEqual(len(graphs), 1)
        self.assertEqual(graphs[0].get_type(), 'digraph')
        self.assertEqual([node for node in graphs[0].get_nodes() if node.get_name() not in ('node', 'edge', 'graph')], [])
        self.assertEqual(graphs[0].get_edges(), [])

    def test_unsupported_type(self):
        '''This tests that exporting something else is an error.'''

        with self.assertRaises(TypeError):
            export_dot(42)


class GenerateCommandTests(SimpleTestCase):
    '''This class tests the **genautomaton** command.'''

    def test_same_seed_same_output(self):
        '''This tests that two runs with the same seed write the same bytes.'''

        outputs = []
        for _ in range(2):
            out = StringIO()
            call_command('genautomaton', seed=42, states=5, stdout=out)
            outputs.append(out.getvalue())
        self.assertEqual(outputs[0], outputs[1])
        self.assertEqual(parse(outputs[0]), document_from_automaton(random_automaton(42, states=5)))

    def test_writes_file(self):
        '''This tests that --out writes a file which loads back.'''

        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'generated.json')
            call_command('genautomaton', seed=1, out=path, secret_ratio=0.0)
            g = load_automaton(path)
        self.assertEqual(g.secret_states, frozenset())

    def test_bad_ratio(self):
        '''This tests that a ratio outside [0, 1] is an input error.'''

        with self.assertRaises(CommandError) as raised:
            call_command('genautomaton', obs_ratio=1.5, stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 2)

    def test_bad_count(self):
        '''This tests that a state count below one is an input error.'''

        with self.assertRaises(CommandError) as raised:
            call_command('genautomaton', states=0, stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 2)
