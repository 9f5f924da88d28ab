"""Exception hierarchy. Every physics-domain failure derives from PhysicsDomainError."""


class PhysicsDomainError(ValueError):
    """Inputs outside the physical or numerical domain of an operation."""


class DomainError(PhysicsDomainError):
    pass


class TruncationError(PhysicsDomainError):
    """Mode sum did not reach the Parseval target before the cap."""


class UndersamplingError(PhysicsDomainError):
    pass


class NoStopBandError(PhysicsDomainError):
    pass


class PhotonCapError(PhysicsDomainError):
    def __init__(self, message, step=None):
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class UnitError(ValueError):
    """Unparseable or unitless physical value."""
