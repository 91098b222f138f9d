"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to meet its tolerance."""


class SolverError(RuntimeError):
    """The link-selection threshold could not be found."""


class NoSignChangeError(SolverError):
    """The rate difference keeps one sign over the widest allowed bracket."""


class NonConvergenceError(SolverError):
    """Bisection exhausted its iteration budget."""
