"""Exception hierarchy shared by every module of the package."""


class QMPLError(Exception):
    """Base class; ``code`` is the machine-readable tag used by the CLI."""

    code = "error"

    def to_dict(self):
        return {"error": self.code, "message": str(self)}


class InvalidParameterError(QMPLError, ValueError):
    code = "invalid-parameter"


class ModeMismatchError(QMPLError, TypeError):
    """Raised when exact and floating scalars meet in one expression."""

    code = "mode-mismatch"


class ModeError(QMPLError, ValueError):
    """An operation cannot be carried out in the requested scalar mode."""

    code = "mode-error"


class SingularPointError(QMPLError, ZeroDivisionError):
    code = "singular-point"


class SingularLatticePointError(SingularPointError):
    code = "singular-lattice-point"

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"integrand singular at lattice index {index}")


class UnsupportedRegimeError(QMPLError, ValueError):
    code = "unsupported-regime"


class DomainError(QMPLError, ValueError):
    """Arguments lie outside the absolute-convergence domain of the series."""

    code = "domain-error"


class DivergentSeriesError(DomainError):
    code = "divergent-series"


class UsageError(QMPLError, ValueError):
    code = "usage-error"
