'''The :mod:`automata` app describes partially-observed finite automata with secret states.

The goals of this app are:

* to read, validate and write automaton files in a canonical JSON form.
* to provide the basic operations (projection, extended transition function, unobservable reach) the other apps are built on.
* to render automata in DOT form and to generate random automata for testing.
'''
