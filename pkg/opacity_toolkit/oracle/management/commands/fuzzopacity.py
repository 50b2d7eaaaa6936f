'''This command runs a seeded campaign comparing the checkers with the oracles.

The exit status is 0 when there is no discrepancy and 1 otherwise.
'''

from django.core.management.base import BaseCommand, CommandError

from opacity_toolkit.forms import FuzzForm
from oracle.campaign import run_campaign


class Command(BaseCommand):
    help = 'Cross-checks the opacity checkers against the reference oracles on random automata.'

    def add_arguments(self, parser):
        parser.add_argument('--count', type=int)
        parser.add_argument('--max-states', type=int, dest='max_states')
        parser.add_argument('--max-events', type=int, dest='max_events')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--workers', type=int)
        parser.add_argument('--fixtures', action='store_true',
                            help='Also check every recorded fixture against its recorded verdicts.')

    def handle(self, *args, **options):
        form = FuzzForm(data=options)
        if not form.is_valid():
            raise CommandError(form.errors.as_text(), returncode=2)
        data = form.cleaned_data
        report = run_campaign(data['count'], data['max_states'], data['max_events'], seed=data['seed'],
                              workers=data['workers'], fixtures=data['fixtures'])
        for line in report.lines():
            self.stdout.write(line)
        if not report.ok:
            raise SystemExit(1)
