"""
This package contains the unit tests for the :mod:`constructions` app.

* :class:`~constructions.tests.SubautomatonTests` for the non-secret and initial-secret subautomata
* :class:`~constructions.tests.ObserverTests`
* :class:`~constructions.tests.CompositionTests`
* :class:`~constructions.tests.BoundedLanguageTests` compares the structures with the runs of seeded random systems
* :class:`~constructions.tests.ExportCommandTests`
"""

import itertools
import os
import tempfile
from io import StringIO

import pydot
from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from automata.utilities import export_dot, load_automaton, parse, random_automaton
from constructions.models import EMPTY, CCState, EventPair, format_subset
from constructions.utilities import build_cc, build_gdss, build_ghat, build_observer
from verifiers.utilities import realize_observation

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'automata', 'fixtures')


def fixture(name):
    return os.path.join(FIXTURES, name)


def fixpoint_reach(g, sources, allowed):
    '''States reachable from sources through allowed states only, by iterating over the transition list.'''
    reached = {state for state in sources if state in allowed}
    changed = True
    while changed:
        changed = False
        for source, _, target in g.transitions:
            if source in reached and target in allowed and target not in reached:
                reached.add(target)
                changed = True
    return frozenset(reached)


class SubautomatonTests(SimpleTestCase):
    '''This class tests :func:`~constructions.utilities.build_gdss` and :func:`~constructions.utilities.build_ghat`.'''

    def test_gdss_drops_secret_states(self):
        '''This tests the non-secret subautomaton of the current-state leak system.'''

        gdss = build_gdss(load_automaton(fixture('current_state_leak.json')))
        self.assertEqual(gdss.states, ('x0', 'x1', 'x2', 'x3'))
        self.assertEqual(gdss.initial_states, frozenset(['x0']))
        self.assertEqual(gdss.secret_states, frozenset())
        self.assertEqual(len(gdss.transitions), 4)

    def test_gdss_of_branching_system(self):
        '''This tests that states only reachable through a secret state are dropped too.'''

        gdss = build_gdss(load_automaton(fixture('strongly_current_state_opaque.json')))
        self.assertEqual(gdss.states, ('x0', 'x1', 'x3', 'x5'))

    def test_gdss_of_secret_free_system(self):
        '''This tests that a system without secrets is its own non-secret subautomaton.'''

        g = load_automaton(fixture('secret_free.json'))
        gdss = build_gdss(g)
        self.assertEqual(gdss.states, g.states)
        self.assertEqual(gdss.transitions, g.transitions)
        self.assertEqual(gdss.events, g.events)
        self.assertEqual(gdss.initial_states, g.initial_states)

    def test_gdss_restricts_alphabet(self):
        '''This tests that events no longer used leave the alphabet.'''

        gdss = build_gdss(load_automaton(fixture('strongly_initial_state_opaque.json')))
        self.assertEqual(gdss.states, ('x1', 'x4'))
        self.assertEqual(gdss.event_names, ('a',))

    def test_gdss_empty_when_every_initial_state_is_secret(self):
        '''This tests that X0 inside X_S gives an empty subautomaton.'''

        g = load_automaton(fixture('initial_state_leak.json')).with_initial_states({'x2'})
        self.assertEqual(build_gdss(g).states, ())
        self.assertIsNone(build_observer(build_gdss(g)).initial)

    def test_ghat(self):
        '''This tests the initial-secret subautomaton.'''

        ghat = build_ghat(load_automaton(fixture('initial_secret_branch.json')))
        self.assertEqual(ghat.states, ('x1', 'x2', 'x3', 'x4', 'x5'))
        self.assertEqual(ghat.initial_states, frozenset(['x1']))

    def test_ghat_empty(self):
        '''This tests that no secret initial state gives an empty subautomaton.'''

        ghat = build_ghat(load_automaton(fixture('current_state_leak.json')))
        self.assertEqual(ghat.states, ())
        self.assertEqual(ghat.initial_states, frozenset())

    def test_random_gdss_is_the_non_secret_reach(self):
        '''This tests the non-secret subautomaton of a hundred random systems against a fixpoint search.'''

        for seed in range(100):
            g = random_automaton(seed, secret_ratio=0.4, initial_ratio=0.4)
            kept = fixpoint_reach(g, g.initial_states, g.state_set - g.secret_states)
            gdss = build_gdss(g)
            self.assertEqual(gdss.state_set, kept)
            self.assertEqual(set(gdss.transitions),
                             {t for t in g.transitions if t.source in kept and t.target in kept})
            self.assertEqual(gdss.initial_states, g.initial_states - g.secret_states)
            self.assertEqual(gdss.secret_states, frozenset())

    def test_random_ghat_is_the_secret_initial_reach(self):
        '''This tests the initial-secret subautomaton of a hundred random systems against a fixpoint search.'''

        for seed in range(100):
            g = random_automaton(seed, secret_ratio=0.4, initial_ratio=0.4)
            kept = fixpoint_reach(g, g.initial_states & g.secret_states, g.state_set)
            ghat = build_ghat(g)
            self.assertEqual(ghat.state_set, kept)
            self.assertEqual(set(ghat.transitions),
                             {t for t in g.transitions if t.source in kept and t.target in kept})
            self.assertEqual(ghat.initial_states, g.initial_states & g.secret_states)
            self.assertEqual(ghat.secret_states, g.secret_states & kept)


class ObserverTests(SimpleTestCase):
    '''This class tests :func:`~constructions.utilities.build_observer`.'''

    def test_current_state_estimates(self):
        '''This tests the estimates of the current-state leak system after a and after ab^k.'''

        obs = build_observer(load_automaton(fixture('current_state_leak.json')))
        self.assertEqual(obs.initial, ('x0', 'x1'))
        self.assertEqual(obs.run(('a',)), ('x2', 'x3', 'x4', 'x5'))
        for k in range(1, 4):
            self.assertEqual(obs.run(('a',) + ('b',) * k), ('x3', 'x5'))
        self.assertIsNone(obs.run(('b',)))
        self.assertFalse(obs.accepts(('b',)))

    def test_observer_of_gdss(self):
        '''This tests the observer of the non-secret subautomaton of the strongly current-state opaque system.'''

        obs = build_observer(build_gdss(load_automaton(fixture('strongly_current_state_opaque.json'))))
        self.assertEqual(obs.states, (('x0',), ('x1', 'x5'), ('x3',)))
        self.assertEqual(obs.alphabet, ('a', 'b'))
        self.assertEqual(obs.transitions, {
            (('x0',), 'a'): ('x1', 'x5'),
            (('x1', 'x5'), 'b'): ('x3',),
            (('x3',), 'a'): ('x0',),
        })

    def test_subsets_are_never_empty(self):
        '''This tests that no observer state is the empty subset.'''

        for seed in range(50):
            obs = build_observer(random_automaton(seed))
            for state in obs.states:
                self.assertTrue(state)

    def test_format_subset(self):
        '''This tests the text of subsets and of EMPTY.'''

        self.assertEqual(format_subset(('x1', 'x5')), '{x1,x5}')
        self.assertEqual(format_subset(EMPTY), '{}')


class CompositionTests(SimpleTestCase):
    '''This class tests :func:`~constructions.utilities.build_cc` and the classification of product states.'''

    def compose(self, name, left='g'):
        g = load_automaton(fixture(name))
        obs = build_observer(build_gdss(g))
        return build_cc(g if left == 'g' else build_ghat(g), obs)

    def test_contains_secret_state_with_estimate(self):
        '''This tests that the product of the strongly current-state opaque system reaches (x4,{x1,x5}).'''

        cc = self.compose('strongly_current_state_opaque.json')
        self.assertIn(CCState('x4', ('x1', 'x5')), cc.states)
        self.assertEqual(cc.leaking_states(), ())
        self.assertEqual(set(cc.non_leaking_secret_states()),
                         {CCState('x2', ('x1', 'x5')), CCState('x4', ('x1', 'x5'))})

    def test_leaking_secret_state(self):
        '''This tests the classification of the product of the current-state leak system.'''

        cc = self.compose('current_state_leak.json')
        self.assertTrue(cc.complete)
        self.assertEqual(cc.leaking_secret_states(), (CCState('x5', EMPTY),))
        self.assertEqual(set(cc.leaking_states()), {CCState('x5', EMPTY), CCState('x6', EMPTY)})
        self.assertEqual(set(cc.non_leaking_secret_states()), {
            CCState('x4', ('x2', 'x3')), CCState('x5', ('x2', 'x3')), CCState('x5', ('x3',))})

    def test_two_leaking_states(self):
        '''This tests that the initial-secret product of the branching system has exactly two leaking states.'''

        cc = self.compose('initial_secret_branch.json', left='ghat')
        self.assertEqual(set(cc.leaking_states()), {CCState('x4', EMPTY), CCState('x5', EMPTY)})

    def test_empty_is_absorbing(self):
        '''This tests that no transition leaves an EMPTY right component.'''

        cc = self.compose('current_state_leak.json')
        for source, _, target in cc.transitions:
            if source.right is EMPTY:
                self.assertIs(target.right, EMPTY)

    def test_event_pairs(self):
        '''This tests that observable events are paired with themselves and unobservable ones with eps.'''

        cc = self.compose('current_state_leak.json')
        pairs = {pair for _, pair, _ in cc.transitions}
        self.assertIn(EventPair('a', 'a'), pairs)
        self.assertIn(EventPair('u', None), pairs)
        self.assertEqual(str(EventPair('u', None)), '(u,eps)')
        self.assertEqual(str(CCState('x5', EMPTY)), '(x5,{})')

    def test_stop_when(self):
        '''This tests that exploration stops at the first state satisfying the condition.'''

        g = load_automaton(fixture('current_state_leak.json'))
        cc = build_cc(g, build_observer(build_gdss(g)),
                      stop_when=lambda state: state.right is EMPTY and state.left in g.secret_states)
        self.assertFalse(cc.complete)
        self.assertEqual(cc.states[-1], CCState('x5', EMPTY))
        self.assertEqual(len(cc.states), 6)

    def test_empty_left(self):
        '''This tests that an empty left automaton gives an empty product.'''

        cc = self.compose('current_state_leak.json', left='ghat')
        self.assertEqual(cc.states, ())
        self.assertEqual(cc.transitions, ())


class BoundedLanguageTests(SimpleTestCase):
    '''This class compares the observer and the product with the runs of a hundred seeded random systems, up to a depth.'''

    def setUp(self):
        self.depth = settings.OPACITY['LANGUAGE_DEPTH']
        self.systems = [random_automaton(seed) for seed in range(100)]

    def test_observer_language_is_projected_language(self):
        '''This tests that the observer accepts exactly the projections of the non-secret runs.'''

        for g in self.systems:
            gdss = build_gdss(g)
            obs = build_observer(gdss)
            for run in gdss.enumerate_runs(self.depth):
                estimate = obs.run(gdss.project(run.events))
                self.assertIsNotNone(estimate)
                self.assertIn(run.end, estimate)
            for length in range(self.depth + 1):
                for word in itertools.product(obs.alphabet, repeat=length):
                    realized = realize_observation(gdss, gdss.initial_states, word, gdss.state_set)
                    self.assertEqual(obs.accepts(word), realized is not None)

    def test_estimates_are_exact(self):
        '''This tests that an estimate holds exactly the states some run with that observation ends in.'''

        for g in self.systems:
            obs = build_observer(g)
            for length in range(min(self.depth, 3) + 1):
                for word in itertools.product(obs.alphabet, repeat=length):
                    ends = {state for state in g.states
                            if realize_observation(g, g.initial_states, word, {state}) is not None}
                    estimate = obs.run(word)
                    self.assertEqual(ends, set(estimate) if estimate is not None else set())

    def test_product_left_language(self):
        '''This tests that every run of the system is tracked by the product, with the expected estimate.'''

        for g in self.systems:
            obs = build_observer(build_gdss(g))
            cc = build_cc(g, obs)
            states = set(cc.states)
            for run in g.enumerate_runs(self.depth):
                right = obs.run(g.project(run.events))
                self.assertIn(CCState(run.end, EMPTY if right is None else right), states)

    def test_product_moves_agree(self):
        '''This tests that both components of every product move carry the same observation.'''

        for g in self.systems:
            obs = build_observer(build_gdss(g))
            cc = build_cc(g, obs)
            for source, pair, target in cc.transitions:
                self.assertIn(target.left, g.successors(source.left, pair.event))
                if pair.observed is None:
                    self.assertFalse(g.is_observable(pair.event))
                    self.assertEqual(target.right, source.right)
                else:
                    self.assertEqual(pair.observed, pair.event)
                    self.assertTrue(g.is_observable(pair.event))
                    expected = EMPTY if source.right is EMPTY else (obs.step(source.right, pair.event) or EMPTY)
                    self.assertEqual(target.right, expected)


class ExportCommandTests(SimpleTestCase):
    '''This class tests the **exportstructure** command.'''

    def export(self, name, **options):
        out = StringIO()
        call_command('exportstructure', fixture(name), stdout=out, **options)
        return out.getvalue()

    def test_observer_dot(self):
        '''This tests the DOT export of the observer of the strongly current-state opaque system.'''

        text = self.export('strongly_current_state_opaque.json', structure='observer')
        graph = pydot.graph_from_dot_data(text)[0]
        labels = {node.get('label') for node in graph.get_nodes() if node.get('shape') == 'box'}
        self.assertEqual(labels, {'"{x0}"', '"{x1,x5}"', '"{x3}"'})
        self.assertEqual(len([edge for edge in graph.get_edges() if edge.get_source() != 'init0']), 3)

    def test_cc_dot_has_leaking_state(self):
        '''This tests that the product of the current-state leak system contains (x5,{}).'''

        text = self.export('current_state_leak.json', structure='cc')
        self.assertIn('"(x5,{})"', text)
        self.assertEqual(len(pydot.graph_from_dot_data(text)), 1)

    def test_cc_dot_has_secret_estimate_state(self):
        '''This tests that the product of the strongly current-state opaque system contains (x4,{x1,x5}).'''

        self.assertIn('"(x4,{x1,x5})"', self.export('strongly_current_state_opaque.json', structure='cc'))

    def test_gdss_native_of_secret_free_system(self):
        '''This tests that the non-secret subautomaton of a secret-free system is the system itself.'''

        text = self.export('secret_free.json', structure='gdss', format='native')
        with open(fixture('secret_free.json'), 'rb') as inputfile:
            self.assertEqual(parse(text), parse(inputfile.read()))

    def test_native_cc_loads_back(self):
        '''This tests that a product written in the native format is a valid automaton file.'''

        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'cc.json')
            call_command('exportstructure', fixture('initial_secret_branch.json'), structure='cc-hat',
                         format='native', out=path)
            cc = load_automaton(path)
        self.assertIn('(x4,{})', cc.states)
        self.assertIn('(b,b)', cc.observable_events)
        self.assertIn('(u,eps)', cc.unobservable_events)

    def test_empty_structure_warns(self):
        '''This tests that exporting an empty initial-secret subautomaton only warns.'''

        with self.assertLogs('constructions', 'WARNING') as logs:
            text = self.export('current_state_leak.json', structure='ghat', format='native')
        self.assertIn('no state', logs.output[0])
        self.assertEqual(parse(text).states, ())

    def test_empty_structure_dot(self):
        '''This tests that empty subautomata and observers export as empty DOT digraphs.'''

        for structure in ('ghat', 'cc-hat'):
            with self.assertLogs('constructions', 'WARNING'):
                text = self.export('current_state_leak.json', structure=structure)
            graphs = pydot.graph_from_dot_data(text)
            self.assertEqual(len(graphs), 1)
            self.assertEqual(graphs[0].get_type(), 'digraph')
            self.assertEqual([node for node in graphs[0].get_nodes()
                              if node.get_name() not in ('node', 'edge', 'graph')], [])
            self.assertEqual(graphs[0].get_edges(), [])
        g = load_automaton(fixture('initial_state_leak.json')).with_initial_states({'x2'})
        graph = pydot.graph_from_dot_data(export_dot(build_observer(build_gdss(g))))[0]
        self.assertEqual(graph.get_edges(), [])

    def test_deterministic(self):
        '''This tests that two exports write the same bytes.'''

        first = self.export('initial_secret_branch.json', structure='cc-hat')
        self.assertEqual(first, self.export('initial_secret_branch.json', structure='cc-hat'))

    def test_unknown_structure(self):
        '''This tests that an unknown structure is an input error.'''

        with self.assertRaises(CommandError) as raised:
            self.export('current_state_leak.json', structure='powerset')
        self.assertEqual(raised.exception.returncode, 2)

    def test_missing_file(self):
        '''This tests that a missing file is an input error.'''

        with self.assertRaises(CommandError) as raised:
            call_command('exportstructure', fixture('missing.json'), structure='system', stdout=StringIO())
        self.assertEqual(raised.exception.returncode, 2)
