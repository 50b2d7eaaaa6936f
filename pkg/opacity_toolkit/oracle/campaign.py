'''This package runs seeded campaigns comparing the :mod:`verifiers` checkers with the :mod:`oracle` deciders.

For every instance the five checkers and the five oracles are run.  Any disagreement, any failing
verdict whose witness does not replay, and any violation of the implications

* SCSO implies CSO
* SISO implies ISO
* Inf-SSO implies SCSO

is a discrepancy.  Instances are independent, so they may be spread over worker processes; results
are always reported in seed order.
'''

import json
import logging
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import django
from django.apps import apps

from automata.utilities import load_automaton, random_automaton
from oracle.models import MalformedWitness
from oracle.utilities import ORACLES, replay_witness
from verifiers.models import Property
from verifiers.utilities import check

logger = logging.getLogger(__name__)

SEED_STRIDE = 1000003

IMPLICATIONS = (
    (Property.SCSO, Property.CSO),
    (Property.SISO, Property.ISO),
    (Property.INF_SSO, Property.SCSO),
)


@dataclass
class InstanceResult:
    '''The outcome of one instance: its verdicts and everything found wrong with them.'''

    name: str
    verdicts: dict
    discrepancies: list = field(default_factory=list)

    @property
    def inf_sso_not_siso(self):
        return self.verdicts[Property.INF_SSO] and not self.verdicts[Property.SISO]


@dataclass
class CampaignReport:
    '''This object aggregates the results of a campaign.

    holds and fails count verdicts per property; discrepancies lists readable descriptions in seed order.
    '''

    instances: int = 0
    holds: dict = field(default_factory=lambda: {prop: 0 for prop in Property})
    fails: dict = field(default_factory=lambda: {prop: 0 for prop in Property})
    discrepancies: list = field(default_factory=list)
    inf_sso_not_siso: int = 0

    @property
    def ok(self):
        return not self.discrepancies

    def add(self, result):
        self.instances += 1
        for prop, holds in result.verdicts.items():
            if holds:
                self.holds[prop] += 1
            else:
                self.fails[prop] += 1
        self.discrepancies.extend('%s: %s' % (result.name, problem) for problem in result.discrepancies)
        if result.inf_sso_not_siso:
            self.inf_sso_not_siso += 1

    def lines(self):
        '''The report as text lines.'''
        lines = ['%i instances' % self.instances]
        for prop in Property:
            lines.append('%-8s holds %5i  fails %5i' % (prop.label, self.holds[prop], self.fails[prop]))
        lines.append('Inf-SSO but not SISO: %i' % self.inf_sso_not_siso)
        lines.append('%i discrepancies' % len(self.discrepancies))
        lines.extend(self.discrepancies)
        return lines


def compare(g, name, expected=None):
    '''This function runs every checker and every oracle on g and collects the discrepancies.

    expected optionally maps properties to recorded verdicts, which must be matched as well.
    '''

    verdicts = {}
    problems = []
    for prop in Property:
        verdict = check(g, prop, witness=True)
        verdicts[prop] = verdict.holds
        oracle = ORACLES[prop](g)
        if verdict.holds != oracle:
            problems.append('%s verifier %s, oracle %s' % (prop.label, verdict.holds, oracle))
        if expected is not None and prop in expected and verdict.holds != expected[prop]:
            problems.append('%s verifier %s, recorded %s' % (prop.label, verdict.holds, expected[prop]))
        if verdict.holds:
            continue
        if verdict.witness is None:
            problems.append('%s fails without a witness' % prop.label)
            continue
        try:
            replayed = replay_witness(g, verdict.witness, prop)
        except MalformedWitness as error:
            problems.append('%s witness does not replay: %s' % (prop.label, error))
        else:
            if not replayed:
                problems.append('%s witness %s is not a violation' % (prop.label, verdict.witness.run))
    for stronger, weaker in IMPLICATIONS:
        if verdicts[stronger] and not verdicts[weaker]:
            problems.append('%s holds but %s fails' % (stronger.label, weaker.label))
    return InstanceResult(name=name, verdicts=verdicts, discrepancies=problems)


def instance_automaton(seed, max_states, max_events):
    '''The random automaton of a campaign instance; its sizes and ratios are drawn from the seed as well.'''

    rng = random.Random(seed)
    return random_automaton(
        seed,
        states=rng.randint(1, max_states),
        events=rng.randint(1, max_events),
        obs_ratio=rng.random(),
        secret_ratio=rng.random(),
        density=rng.uniform(0.1, 0.5),
        initial_ratio=rng.uniform(0, 0.4))


def evaluate_instance(seed, max_states, max_events):
    return compare(instance_automaton(seed, max_states, max_events), 'seed %i' % seed)


def fixture_directory():
    return os.path.join(apps.get_app_config('automata').path, 'fixtures')


def recorded_verdicts():
    '''The recorded verdicts of every fixture, keyed by file name.'''

    with open(os.path.join(fixture_directory(), 'verdicts.json')) as verdictfile:
        raw = json.load(verdictfile)
    return {filename: {Property(name): holds for name, holds in verdicts.items()}
            for filename, verdicts in raw.items()}


def evaluate_fixture(path, expected):
    return compare(load_automaton(path), os.path.basename(path), expected)


def run_campaign(count, max_states, max_events, seed=0, workers=1, fixtures=False):
    '''This function runs a campaign of count random instances and returns a :class:`~oracle.campaign.CampaignReport`.

    Instance i uses the seed seed * 1000003 + i, so a campaign is fully determined by its parameters.
    When fixtures is set, every recorded fixture is evaluated first against its recorded verdicts.
    '''

    report = CampaignReport()
    if fixtures:
        for filename, expected in sorted(recorded_verdicts().items()):
            report.add(evaluate_fixture(os.path.join(fixture_directory(), filename), expected))

    seeds = [seed * SEED_STRIDE + index for index in range(count)]
    evaluate = partial(evaluate_instance, max_states=max_states, max_events=max_events)
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers, initializer=django.setup) as executor:
            results = executor.map(evaluate, seeds, chunksize=max(1, count // (workers * 4)))
            for result in results:
                report.add(result)
    else:
        for result in map(evaluate, seeds):
            report.add(result)

    for problem in report.discrepancies:
        logger.error('Discrepancy %s', problem)
    logger.info('Campaign of %i instances with %i discrepancies', report.instances, len(report.discrepancies))
    return report
