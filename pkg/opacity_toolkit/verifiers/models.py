'''This package has the result objects of the :mod:`verifiers` app.

* The five decided properties as :class:`~verifiers.models.Property`
* A concrete violation as :class:`~verifiers.models.Witness`
* The outcome of one check as :class:`~verifiers.models.Verdict`
'''

import enum
from dataclasses import dataclass, field
from typing import Optional

from constructions.models import CCState, format_subset


def describe_state(state):
    '''Text for a product state or an estimate.'''
    if isinstance(state, CCState):
        return str(state)
    return format_subset(state)


class Property(enum.Enum):
    '''The opacity properties, valued by their command-line names.'''

    CSO = 'cso'
    ISO = 'iso'
    SCSO = 'scso'
    SISO = 'siso'
    INF_SSO = 'inf-sso'

    def __str__(self):
        return self.value

    @property
    def label(self):
        return self.name.replace('_', '-')


@dataclass(frozen=True)
class Witness:
    '''This object is a run of the original system that violates a property.

    offending_state is the bad product state, or the all-secret estimate for current-state opacity.
    '''

    event_sequence: tuple
    observation: tuple
    offending_state: object
    run: object

    def as_record(self):
        return {
            'event_sequence': list(self.event_sequence),
            'observation': list(self.observation),
            'offending_state': describe_state(self.offending_state),
            'run': str(self.run),
        }


@dataclass(frozen=True)
class Verdict:
    '''This object is the outcome of checking one property on one system.

    A witness is only present when the property fails and extraction was requested.
    offending_states lists every bad state and is only filled by an exhaustive check.
    '''

    property: Property
    holds: bool
    witness: Optional[Witness] = None
    stats: dict = field(default_factory=dict, hash=False)
    offending_states: tuple = ()
    elapsed: float = field(default=0.0, compare=False)

    def __str__(self):
        return '%s %s' % (self.property.label, 'holds' if self.holds else 'fails')

    def as_record(self):
        '''The machine-readable record; wall time is left out so records are byte-stable.'''
        record = {
            'property': self.property.value,
            'holds': self.holds,
            'stats': self.stats,
        }
        if self.offending_states:
            record['offending_states'] = [describe_state(state) for state in self.offending_states]
        if self.witness is not None:
            record['witness'] = self.witness.as_record()
        return record
