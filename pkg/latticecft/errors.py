from __future__ import annotations


class LatticeCftError(Exception):
    """Base class for every error raised by latticecft."""


class ConfigError(LatticeCftError, ValueError):
    pass


class BackendMismatch(LatticeCftError, ValueError):
    pass


class NonIntegralPairing(LatticeCftError, ValueError):
    pass


class OddNorm(LatticeCftError, ValueError):
    pass


class DependentGenerators(LatticeCftError, ValueError):
    pass


class DegenerateForm(LatticeCftError, ValueError):
    pass


class NotRational(LatticeCftError, ValueError):
    pass


class InconsistentSystem(LatticeCftError, RuntimeError):
    pass


class CutoffTooLarge(LatticeCftError, RuntimeError):
    pass


class OutOfWindow(LatticeCftError, IndexError):
    pass


class QuadratureUnstable(LatticeCftError, RuntimeError):
    pass


class CheckFailure(LatticeCftError, RuntimeError):
    pass
