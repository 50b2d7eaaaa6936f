'''This package contains the forms which validate the options of the management commands.

* :class:`~opacity_toolkit.forms.CheckForm` for **checkopacity**
* :class:`~opacity_toolkit.forms.ExportForm` for **exportstructure**
* :class:`~opacity_toolkit.forms.GenerateForm` for **genautomaton**
* :class:`~opacity_toolkit.forms.FuzzForm` for **fuzzopacity**

Omitted values fall back to ``settings.OPACITY``.
'''

import os

from django import forms
from django.conf import settings

from verifiers.models import Property

STRUCTURES = ('system', 'gdss', 'ghat', 'observer', 'cc', 'cc-hat')


def _default(form, name, key):
    value = form.cleaned_data.get(name)
    return settings.OPACITY[key] if value is None else value


class InputFileForm(forms.Form):
    '''Base form for commands reading an automaton file.'''

    filename = forms.CharField()

    def clean_filename(self):
        data = self.cleaned_data['filename']
        if not os.path.isfile(data):
            raise forms.ValidationError('Cannot read %(filename)s.', code='unreadable', params={'filename': data})
        return data


class CheckForm(InputFileForm):
    '''This form validates the options of a check.'''

    properties = forms.CharField(required=False, help_text='Comma separated, among cso, iso, scso, siso, inf-sso.')
    witness = forms.BooleanField(required=False)
    all_leaks = forms.BooleanField(required=False)
    output = forms.ChoiceField(choices=(('human', 'human'), ('machine', 'machine')), required=False)

    def clean_properties(self):
        '''This function turns the comma separated list into :class:`~verifiers.models.Property` members, all of them by default.'''

        data = self.cleaned_data['properties']
        if not data:
            return list(Property)
        selected = []
        for name in data.split(','):
            name = name.strip().lower()
            try:
                prop = Property(name)
            except ValueError:
                raise forms.ValidationError('Unknown property %(name)s.', code='property', params={'name': name})
            if prop not in selected:
                selected.append(prop)
        return selected

    def clean_output(self):
        return self.cleaned_data['output'] or 'human'


class ExportForm(InputFileForm):
    '''This form validates the options of an export.'''

    structure = forms.ChoiceField(choices=[(name, name) for name in STRUCTURES])
    format = forms.ChoiceField(choices=(('dot', 'dot'), ('native', 'native')), required=False)
    out = forms.CharField(required=False)

    def clean_format(self):
        return self.cleaned_data['format'] or 'dot'


class GenerateForm(forms.Form):
    '''This form validates the size parameters of a random automaton.'''

    states = forms.IntegerField(required=False, min_value=1)
    events = forms.IntegerField(required=False, min_value=1)
    obs_ratio = forms.FloatField(required=False, min_value=0, max_value=1)
    secret_ratio = forms.FloatField(required=False, min_value=0, max_value=1)
    density = forms.FloatField(required=False, min_value=0, max_value=1)
    initial_ratio = forms.FloatField(required=False, min_value=0, max_value=1)
    seed = forms.IntegerField(required=False)
    out = forms.CharField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        if self.errors:
            return cleaned_data
        for name, key in (('states', 'GEN_STATES'), ('events', 'GEN_EVENTS'), ('obs_ratio', 'GEN_OBS_RATIO'),
                          ('secret_ratio', 'GEN_SECRET_RATIO'), ('density', 'GEN_DENSITY'),
                          ('initial_ratio', 'GEN_INITIAL_RATIO'), ('seed', 'DEFAULT_SEED')):
            cleaned_data[name] = _default(self, name, key)
        return cleaned_data


class FuzzForm(forms.Form):
    '''This form validates the parameters of a random campaign.'''

    count = forms.IntegerField(required=False, min_value=0)
    max_states = forms.IntegerField(required=False, min_value=1)
    max_events = forms.IntegerField(required=False, min_value=1)
    seed = forms.IntegerField(required=False)
    workers = forms.IntegerField(required=False, min_value=1)
    fixtures = forms.BooleanField(required=False)

    def clean(self):
        cleaned_data = super().clean()
        if self.errors:
            return cleaned_data
        for name, key in (('count', 'FUZZ_COUNT'), ('max_states', 'FUZZ_MAX_STATES'),
                          ('max_events', 'FUZZ_MAX_EVENTS'), ('seed', 'DEFAULT_SEED'), ('workers', 'FUZZ_WORKERS')):
            cleaned_data[name] = _default(self, name, key)
        return cleaned_data
