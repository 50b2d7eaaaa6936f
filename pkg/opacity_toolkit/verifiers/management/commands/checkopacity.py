'''This command checks opacity properties of an automaton file.

The exit status is 0 when every requested property holds, 1 when one fails and 2 on an input error.
'''

import json

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from automata.utilities import describe_error, load_automaton
from opacity_toolkit.forms import CheckForm
from verifiers.models import describe_state
from verifiers.utilities import check


class Command(BaseCommand):
    help = 'Checks the opacity properties of an automaton file.'

    def add_arguments(self, parser):
        parser.add_argument('filename')
        parser.add_argument('--property', dest='properties', default='',
                            help='Comma separated properties among cso, iso, scso, siso, inf-sso (default: all).')
        parser.add_argument('--witness', action='store_true', help='Extract a shortest witness for each failing property.')
        parser.add_argument('--all-leaks', action='store_true', dest='all_leaks',
                            help='Explore exhaustively and list every offending state.')
        parser.add_argument('--output', default='human', help='human or machine.')

    def handle(self, *args, **options):
        form = CheckForm(data=options)
        if not form.is_valid():
            raise CommandError(form.errors.as_text(), returncode=2)
        data = form.cleaned_data
        try:
            g = load_automaton(data['filename'])
        except (ValidationError, OSError, UnicodeDecodeError) as error:
            raise CommandError(describe_error(error), returncode=2)

        verdicts = [check(g, prop, witness=data['witness'], exhaustive=data['all_leaks'])
                    for prop in data['properties']]
        for verdict in verdicts:
            if data['output'] == 'machine':
                self.stdout.write(json.dumps(verdict.as_record(), sort_keys=True))
            else:
                self.write_human(verdict)
        if not all(verdict.holds for verdict in verdicts):
            raise SystemExit(1)

    def write_human(self, verdict):
        self.stdout.write('%s (%.3fs)' % (verdict, verdict.elapsed))
        if verdict.offending_states:
            self.stdout.write('  offending states: %s' % ' '.join(
                describe_state(state) for state in verdict.offending_states))
        if verdict.witness is not None:
            self.stdout.write('  observation: %s' % (' '.join(verdict.witness.observation) or 'eps'))
            self.stdout.write('  run: %s' % verdict.witness.run)
            self.stdout.write('  reaches: %s' % describe_state(verdict.witness.offending_state))
