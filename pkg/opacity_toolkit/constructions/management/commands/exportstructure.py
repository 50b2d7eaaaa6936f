'''This command writes a system or one of its derived structures, in DOT or in the native file format.'''

import logging

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from automata.utilities import describe_error, document_from_automaton, export_dot, load_automaton, serialize
from constructions.models import CCAutomaton, ObserverAutomaton
from constructions.utilities import (build_cc, build_gdss, build_ghat, build_observer, cc_as_automaton,
                                     observer_as_automaton)
from opacity_toolkit.forms import ExportForm

logger = logging.getLogger(__name__)


def build_structure(g, structure):
    '''The requested structure of g: an automaton, an observer or a composition.'''

    if structure == 'system':
        return g
    if structure == 'gdss':
        return build_gdss(g)
    if structure == 'ghat':
        return build_ghat(g)
    observer = build_observer(build_gdss(g))
    if structure == 'observer':
        return observer
    if structure == 'cc':
        return build_cc(g, observer)
    return build_cc(build_ghat(g), observer)


def native_automaton(built):
    if isinstance(built, ObserverAutomaton):
        return observer_as_automaton(built)
    if isinstance(built, CCAutomaton):
        return cc_as_automaton(built)
    return built


class Command(BaseCommand):
    help = 'Exports a system or a derived structure (gdss, ghat, observer, cc, cc-hat).'

    def add_arguments(self, parser):
        parser.add_argument('filename')
        parser.add_argument('--structure', required=True, help='system, gdss, ghat, observer, cc or cc-hat.')
        parser.add_argument('--format', default='dot', help='dot or native.')
        parser.add_argument('--out', help='Output file (default: standard output).')

    def handle(self, *args, **options):
        form = ExportForm(data=options)
        if not form.is_valid():
            raise CommandError(form.errors.as_text(), returncode=2)
        data = form.cleaned_data
        try:
            g = load_automaton(data['filename'])
        except (ValidationError, OSError, UnicodeDecodeError) as error:
            raise CommandError(describe_error(error), returncode=2)

        built = build_structure(g, data['structure'])
        if not built.states:
            logger.warning('The %s of %s has no state; exporting an empty structure.',
                           data['structure'], data['filename'])
        if data['format'] == 'native':
            content = serialize(document_from_automaton(native_automaton(built)))
        else:
            content = export_dot(built).encode('utf-8')

        if data['out']:
            with open(data['out'], 'wb') as outputfile:
                outputfile.write(content)
        else:
            self.stdout.write(content.decode('utf-8'), ending='')
