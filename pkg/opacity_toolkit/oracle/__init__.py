"""The :mod:`oracle` app cross-checks the :mod:`verifiers` app.

It decides every property again from its definition, without the constructions, replays witnesses
against the original system and runs seeded random campaigns comparing both sides.
"""
