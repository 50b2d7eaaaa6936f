'''This package controls the validation of automaton files for the :mod:`automata` app.

The only form class defined is :class:`~automata.forms.AutomatonDocumentForm`, which is bound to the
decoded JSON object of an automaton file by :func:`automata.utilities.parse`.
'''

from django import forms
from django.conf import settings


def _check_name(value, kind):
    if not isinstance(value, str) or not value or any(char.isspace() for char in value):
        raise forms.ValidationError('Invalid %(kind)s name %(name)r: names are nonempty strings without whitespace.',
                                    code='invalid', params={'kind': kind, 'name': value})
    return value


def _check_unique(values, kind):
    seen = set()
    for value in values:
        if value in seen:
            raise forms.ValidationError('Duplicate %(kind)s %(value)s.', code='duplicate',
                                        params={'kind': kind, 'value': value})
        seen.add(value)
    return values


class DecodedListField(forms.Field):
    '''A field holding a JSON array already decoded by :func:`json.loads`.

    Strings are refused, so an array encoded inside a string is not decoded a second time.
    '''

    def to_python(self, value):
        if value is None:
            return []
        if not isinstance(value, list):
            raise forms.ValidationError('Expected a JSON array, found %(found)r.', code='syntax',
                                        params={'found': value})
        return value


class DecodedIntegerField(forms.Field):
    '''A field holding a JSON integer; strings, floats and booleans are refused.'''

    def to_python(self, value):
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise forms.ValidationError('Expected a JSON integer, found %(found)r.', code='syntax',
                                        params={'found': value})
        return value


class AutomatonDocumentForm(forms.Form):
    '''This form validates the keys of an automaton file.

    Each key has its own clean method; cross references between states, events and transitions are
    checked in :meth:`clean`.
    '''

    format_version = DecodedIntegerField(help_text="Version of the file format.")
    states = DecodedListField(required=False, help_text="List of state names.")
    events = DecodedListField(required=False, help_text="List of {name, observable} objects.")
    transitions = DecodedListField(required=False, help_text="List of [source, event, target] triples.")
    initial = DecodedListField(required=False, help_text="List of initial state names.")
    secret = DecodedListField(required=False, help_text="List of secret state names.")

    def clean_format_version(self):
        '''This function checks that the file was written for the current format version.'''

        data = self.cleaned_data['format_version']
        expected = settings.OPACITY['FORMAT_VERSION']
        if data != expected:
            raise forms.ValidationError('Format version %(found)s is not supported (expected %(expected)s).',
                                        code='version', params={'found': data, 'expected': expected})
        return data

    def _clean_names(self, key, kind):
        data = self.cleaned_data[key]
        return _check_unique([_check_name(name, kind) for name in data], kind)

    def clean_states(self):
        return self._clean_names('states', 'state')

    def clean_initial(self):
        return self._clean_names('initial', 'initial state')

    def clean_secret(self):
        return self._clean_names('secret', 'secret state')

    def clean_events(self):
        '''Events are objects with a name and a boolean observable flag.'''

        data = self.cleaned_data['events']
        events = []
        for entry in data:
            if not isinstance(entry, dict) or set(entry) != {'name', 'observable'}:
                raise forms.ValidationError('Invalid event entry %(entry)r.', code='invalid', params={'entry': entry})
            if not isinstance(entry['observable'], bool):
                raise forms.ValidationError('The observable flag of %(name)s must be true or false.',
                                            code='invalid', params={'name': entry['name']})
            events.append((_check_name(entry['name'], 'event'), entry['observable']))
        _check_unique([name for name, _ in events], 'event')
        return events

    def clean_transitions(self):
        data = self.cleaned_data['transitions']
        triples = []
        for entry in data:
            if not isinstance(entry, list) or len(entry) != 3:
                raise forms.ValidationError('Invalid transition %(entry)r.', code='invalid', params={'entry': entry})
            triples.append((_check_name(entry[0], 'state'), _check_name(entry[1], 'event'), _check_name(entry[2], 'state')))
        return _check_unique(triples, 'transition')

    def clean(self):
        '''This function checks that every referenced state and event is declared.'''

        cleaned_data = super().clean()
        if self.errors:
            return cleaned_data
        states = set(cleaned_data['states'])
        events = {name for name, _ in cleaned_data['events']}
        for source, event, target in cleaned_data['transitions']:
            if source not in states or target not in states:
                raise forms.ValidationError('Transition (%(source)s, %(event)s, %(target)s) references an unknown state.',
                                            code='unknown', params={'source': source, 'event': event, 'target': target})
            if event not in events:
                raise forms.ValidationError('Transition (%(source)s, %(event)s, %(target)s) references an unknown event.',
                                            code='unknown', params={'source': source, 'event': event, 'target': target})
        for key in ('initial', 'secret'):
            unknown = sorted(set(cleaned_data[key]) - states)
            if unknown:
                raise forms.ValidationError('%(key)s references unknown states: %(unknown)s.', code='unknown',
                                            params={'key': key, 'unknown': ', '.join(unknown)})
        return cleaned_data
