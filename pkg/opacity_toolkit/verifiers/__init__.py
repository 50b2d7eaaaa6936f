'''The :mod:`verifiers` app decides the opacity properties of an automaton.

The goals of this app are:

* to decide strong current-state, strong initial-state and strong infinite-step opacity on a concurrent composition.
* to decide standard current-state and initial-state opacity for comparison.
* to extract a shortest violating run whenever a property fails.
'''
