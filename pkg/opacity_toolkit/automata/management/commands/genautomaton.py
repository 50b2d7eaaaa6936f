'''This command writes a random automaton in the native file format.'''

from django.core.management.base import BaseCommand, CommandError

from automata.utilities import document_from_automaton, random_automaton, serialize
from opacity_toolkit.forms import GenerateForm


class Command(BaseCommand):
    help = 'Generates a random accessible automaton; the same seed always gives the same file.'

    def add_arguments(self, parser):
        parser.add_argument('--states', type=int)
        parser.add_argument('--events', type=int)
        parser.add_argument('--obs-ratio', type=float, dest='obs_ratio')
        parser.add_argument('--secret-ratio', type=float, dest='secret_ratio')
        parser.add_argument('--density', type=float)
        parser.add_argument('--initial-ratio', type=float, dest='initial_ratio')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--out', help='Output file (default: standard output).')

    def handle(self, *args, **options):
        form = GenerateForm(data=options)
        if not form.is_valid():
            raise CommandError(form.errors.as_text(), returncode=2)
        data = form.cleaned_data
        aut = random_automaton(data['seed'], states=data['states'], events=data['events'],
                               obs_ratio=data['obs_ratio'], secret_ratio=data['secret_ratio'],
                               density=data['density'], initial_ratio=data['initial_ratio'])
        content = serialize(document_from_automaton(aut))
        if data['out']:
            with open(data['out'], 'wb') as outputfile:
                outputfile.write(content)
        else:
            self.stdout.write(content.decode('utf-8'), ending='')
