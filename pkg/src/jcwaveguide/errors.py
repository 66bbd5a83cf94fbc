"""Exception hierarchy shared by all modules."""


class JCWaveguideError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(JCWaveguideError, ValueError):
    """A physical parameter violates its allowed range."""


class NonPositiveKappa(ParameterError):
    pass


class NegativeG(ParameterError):
    pass


class NegativeGamma(ParameterError):
    pass


class NonFiniteField(ParameterError):
    pass


class DegenerateDenominator(JCWaveguideError, ZeroDivisionError):
    """A rational amplitude was evaluated exactly on one of its poles."""


class UnknownChannel(JCWaveguideError, ValueError):
    pass


class EmptyGrid(JCWaveguideError, ValueError):
    pass


class GridNotIncreasing(JCWaveguideError, ValueError):
    pass


class VanishingDenominator(JCWaveguideError, ZeroDivisionError):
    """The single-photon coefficient that normalizes g2 is zero."""


class StepTooLarge(JCWaveguideError, RuntimeError):
    """The embedded error estimate of the ODE integrator exceeded tolerance."""


class WavepacketNotCleared(JCWaveguideError, RuntimeError):
    """Excitation is still stored in the atom-cavity system at the end of a run."""


class InsufficientResolution(JCWaveguideError, ValueError):
    pass
