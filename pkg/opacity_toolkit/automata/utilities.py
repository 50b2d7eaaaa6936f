'''This package contains utility functions for the :mod:`automata` app.

These functions read and write automaton files, render automata in DOT form and generate random
automata:

* :func:`~automata.utilities.parse` and :func:`~automata.utilities.serialize` for the JSON file format
* :func:`~automata.utilities.load_automaton` to go from a file straight to a validated automaton, and :func:`~automata.utilities.describe_error` to report why it failed
* :func:`~automata.utilities.export_dot`, extended by the :mod:`constructions` app for its own structures
* :func:`~automata.utilities.random_automaton` for seeded random instances
'''

import json
import logging
import random
from functools import singledispatch

import networkx as nx
from django.conf import settings
from django.core.exceptions import ValidationError

from automata.forms import AutomatonDocumentForm
from automata.models import Automaton, AutomatonDocument, validate

logger = logging.getLogger(__name__)


def parse(text):
    '''This function decodes an automaton file into an :class:`~automata.models.AutomatonDocument`.

    Syntax errors are reported with their line and column; field errors come from
    :class:`~automata.forms.AutomatonDocumentForm`.
    '''

    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as error:
            raise ValidationError('Invalid UTF-8 at byte %(position)s: %(message)s', code='syntax',
                                  params={'position': error.start, 'message': error.reason})
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as error:
        raise ValidationError('Syntax error at line %(line)s, column %(column)s: %(message)s',
                              code='syntax', params={'line': error.lineno, 'column': error.colno, 'message': error.msg})
    if not isinstance(raw, dict):
        raise ValidationError('An automaton file must contain a JSON object.', code='syntax')
    unknown = sorted(set(raw) - set(AutomatonDocumentForm.base_fields))
    if unknown:
        raise ValidationError('Unknown keys: %(keys)s.', code='syntax', params={'keys': ', '.join(unknown)})

    form = AutomatonDocumentForm(data=raw)
    if not form.is_valid():
        raise ValidationError(form.errors.as_text(), code='invalid')
    data = form.cleaned_data
    return AutomatonDocument(
        format_version=data['format_version'],
        states=data['states'],
        events=data['events'],
        transitions=data['transitions'],
        initial=data['initial'],
        secret=data['secret'])


def serialize(document):
    '''This function writes a document in canonical form.

    Keys come in a fixed order and every list is sorted, so the output is byte-deterministic.
    '''

    canonical = {
        'format_version': document.format_version,
        'states': list(document.states),
        'events': [{'name': name, 'observable': observable} for name, observable in document.events],
        'transitions': [list(triple) for triple in document.transitions],
        'initial': list(document.initial),
        'secret': list(document.secret),
    }
    return (json.dumps(canonical, indent=2) + '\n').encode('utf-8')


def document_from_automaton(aut):
    '''The document describing an automaton.'''
    return AutomatonDocument(
        format_version=settings.OPACITY['FORMAT_VERSION'],
        states=aut.states,
        events=aut.events,
        transitions=aut.transitions,
        initial=aut.initial_states,
        secret=aut.secret_states)


def load_automaton(filename):
    '''This function reads, parses and validates an automaton file.'''

    with open(filename, 'rb') as inputfile:
        document = parse(inputfile.read())
    aut = validate(document)
    logger.debug('Loaded %s from %s', aut, filename)
    return aut


def describe_error(error):
    '''One line of text for an error raised by :func:`~automata.utilities.load_automaton`.'''
    if isinstance(error, ValidationError):
        return '; '.join(error.messages)
    return str(error)


def dot_quote(text):
    '''Quotes a label for DOT output.'''
    return '"%s"' % text.replace('\\', '\\\\').replace('"', '\\"')


def to_pydot_text(graph):
    '''Renders a networkx graph as DOT text, without the edge keys of a multigraph.'''
    dot = nx.drawing.nx_pydot.to_pydot(graph)
    for edge in dot.get_edges():
        edge.get_attributes().pop('key', None)
    return dot.to_string()


def mark_initial(graph, node_ids):
    '''Adds an entry arrow to each of the given nodes.'''
    for index, node in enumerate(node_ids):
        entry = 'init%i' % index
        graph.add_node(entry, shape='point')
        graph.add_edge(entry, node)


@singledispatch
def export_dot(structure):
    '''This function renders an automaton, an observer or a concurrent composition as a DOT digraph.

    Secret states are drawn with a double border and initial states get an entry arrow.
    '''
    raise TypeError('Cannot export %s to DOT.' % type(structure).__name__)


@export_dot.register
def _(aut: Automaton):
    graph = nx.MultiDiGraph(name='automaton', graph={'rankdir': 'LR'})
    ids = {state: 's%i' % index for index, state in enumerate(aut.states)}
    for state in aut.states:
        attributes = {'label': dot_quote(state), 'shape': 'circle'}
        if state in aut.secret_states:
            attributes['peripheries'] = 2
        graph.add_node(ids[state], **attributes)
    mark_initial(graph, [ids[state] for state in sorted(aut.initial_states)])
    for source, event, target in aut.transitions:
        attributes = {'label': dot_quote(event)}
        if event in aut.unobservable_events:
            attributes['style'] = 'dashed'
        graph.add_edge(ids[source], ids[target], **attributes)
    return to_pydot_text(graph)


def random_automaton(seed, states=None, events=None, obs_ratio=None, secret_ratio=None, density=None,
                     initial_ratio=None):
    '''This function generates a random accessible automaton.

    A spanning tree rooted at x0 is laid down first, so every state is reachable and validation never
    prunes.  Further transitions are then added independently with probability density.  The same
    arguments always give the same automaton.
    '''

    defaults = settings.OPACITY
    states = defaults['GEN_STATES'] if states is None else states
    events = defaults['GEN_EVENTS'] if events is None else events
    obs_ratio = defaults['GEN_OBS_RATIO'] if obs_ratio is None else obs_ratio
    secret_ratio = defaults['GEN_SECRET_RATIO'] if secret_ratio is None else secret_ratio
    density = defaults['GEN_DENSITY'] if density is None else density
    initial_ratio = defaults['GEN_INITIAL_RATIO'] if initial_ratio is None else initial_ratio
    if states < 1 or events < 1:
        raise ValueError('A random automaton needs at least one state and one event.')
    for ratio in (obs_ratio, secret_ratio, density, initial_ratio):
        if not 0 <= ratio <= 1:
            raise ValueError('Ratios must lie in [0, 1].')

    rng = random.Random(seed)
    names = ['x%i' % index for index in range(states)]
    observable_count = int(round(obs_ratio * events))
    alphabet = [('o%i' % index, True) for index in range(observable_count)]
    alphabet += [('u%i' % index, False) for index in range(events - observable_count)]
    labels = [name for name, _ in alphabet]

    transitions = set()
    for index in range(1, states):
        transitions.add((names[rng.randrange(index)], rng.choice(labels), names[index]))
    for source in names:
        for label in labels:
            for target in names:
                if rng.random() < density:
                    transitions.add((source, label, target))

    initial = {names[0]} | {name for name in names[1:] if rng.random() < initial_ratio}
    secret = rng.sample(names, int(round(secret_ratio * states)))
    return validate(AutomatonDocument(
        format_version=defaults['FORMAT_VERSION'],
        states=names,
        events=alphabet,
        transitions=transitions,
        initial=initial,
        secret=secret))
