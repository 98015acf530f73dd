"""Exceptions shared across the operator modules."""


class HowedualError(Exception):
    pass


class PoleHit(HowedualError):
    """An evaluation point landed on (or too close to) a pole."""


class NonTelescoping(HowedualError):
    """A Gamma ratio does not reduce to a finite rational product."""


class SpectrumViolation(HowedualError):
    """An operator failed its declared minimal-polynomial bound."""


class ResonantLambda(HowedualError):
    """A dynamical parameter hit a resonance of the ladder recursion."""


class NonUniqueSolution(HowedualError):
    """A defining linear system has solution space of dimension != 1."""


class Inconsistent(HowedualError):
    """A defining linear system has no solution at all."""
