class EngineError(Exception):
    """Base class for every error raised by the engine"""


class SizeMismatchError(EngineError):
    """Operands live in groups Wn of different rank"""


class DomainError(EngineError):
    """Argument outside the mathematical domain of the operation"""


class ResourceError(EngineError):
    """Requested n exceeds the configured group cap"""

    def __init__(self, n: int, cap: int):
        self.n = n
        self.cap = cap
        super().__init__(
            f"n={n} exceeds the group cap {cap}; raise it with --cap or the MRW_CAP_N environment variable"
        )


class FieldError(EngineError):
    """Operation needs a different characteristic"""


class ConsistencyError(EngineError):
    """A theorem-backed invariant failed at runtime"""


class UsageError(EngineError):
    """Malformed user input (composition or bipartition text, flags)"""
