"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class PreconditionError(ValueError):
    """Inputs are well-typed but violate a stated precondition."""


class SolverError(RuntimeError):
    """A numerical solver failed; ``diagnostics`` carries what is known."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __reduce__(self):
        # keep the diagnostics when crossing a process pool
        return type(self), (str(self), self.diagnostics)


class QuadratureError(SolverError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, estimate, error, diagnostics=None):
        super().__init__(message, diagnostics)
        self.estimate = estimate
        self.error = error

    def __reduce__(self):
        return type(self), (str(self), self.estimate, self.error, self.diagnostics)
