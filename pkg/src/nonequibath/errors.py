"""Exception hierarchy shared by the model modules and the CLI."""


class NonequibathError(Exception):
    """Base class for all package errors."""


class ModelError(NonequibathError):
    """The physical model is outside the domain of the kinetic equations."""


class NumericsError(NonequibathError):
    """Numerical settings are unusable."""


class DegenerateBohrFrequency(ModelError):
    def __init__(self, first, second, omega_a, omega_b):
        self.first = tuple(first)
        self.second = tuple(second)
        super().__init__(
            f"Bohr frequencies of transitions {self.first} (omega={omega_a!r}) and "
            f"{self.second} (omega={omega_b!r}) coincide; system is not generic"
        )


class ReducibleGenerator(ModelError):
    def __init__(self, components):
        self.components = [sorted(c) for c in components]
        super().__init__(
            f"level graph is disconnected ({len(self.components)} components: "
            f"{self.components}); stationary state is not unique"
        )


class DisconnectedSystem(ModelError):
    """Fewer than two of the three couplings of a 3-level atom are nonzero."""


class MissingFieldEntry(NonequibathError, KeyError):
    def __init__(self, omega):
        self.omega = omega
        super().__init__(f"field has no entry for Bohr frequency omega={omega!r}")

    def __str__(self):
        return self.args[0]


class NonPositiveBeta(NonequibathError, ValueError):
    pass


class NonPositiveOccupation(NonequibathError, ValueError):
    pass


class ZeroOccupation(NonequibathError, ValueError):
    pass


class StepTooLarge(NumericsError):
    pass


class ConfigError(NonequibathError):
    """Malformed configuration; ``where`` locates the offending field."""

    def __init__(self, where, message):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
