'''The :mod:`constructions` app builds the intermediate structures used to decide opacity.

These are the non-secret subautomaton, the initial-secret subautomaton, the observer of an automaton
and the concurrent composition of an automaton with an observer.
'''
