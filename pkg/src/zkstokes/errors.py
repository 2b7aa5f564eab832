class ZkError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(ZkError, ValueError):
    pass


class DomainError(ZkError, ValueError):
    pass


class DegreeError(ZkError, ValueError):
    pass


class FormatError(ZkError, ValueError):
    pass


class AdmissibilityError(ZkError, ValueError):
    pass


class PreconditionError(ZkError, ValueError):
    pass


class SizeGuardError(ZkError, ValueError):
    """Raised when an enumeration would exceed the configured cap."""


class GenerationFailed(ZkError, RuntimeError):
    pass
