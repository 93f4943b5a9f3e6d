"""Exception hierarchy.

Every error raised by the library derives from :class:`NonlocalDecayError`,
so callers (the CLI in particular) can separate library failures from bugs.
"""


class NonlocalDecayError(Exception):
    """Base class for all library errors."""


class ConfigError(NonlocalDecayError, ValueError):
    """Invalid configuration or parameter value."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        self.detail = message
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class DomainError(NonlocalDecayError, ValueError):
    """Argument outside the domain where an evaluator is defined."""


class InversionError(NonlocalDecayError):
    """Symbol cannot be inverted into a smoothing symbol."""


class GridError(NonlocalDecayError, ValueError):
    """Invalid grid parameters."""


class AdmissibilityError(NonlocalDecayError):
    """Speed does not satisfy the supercriticality (or subcriticality) bound."""


class NotSupercritical(NonlocalDecayError):
    """No decay rate exists because c_eff does not exceed g(0+)."""


class BracketError(NonlocalDecayError):
    """Root of g(y) = c_eff not bracketed inside the analyticity strip."""


class DegenerateError(NonlocalDecayError):
    """g'(delta_c) vanishes, so the kernel tail carries a polynomial factor."""


class FitError(NonlocalDecayError):
    """A regression window is unusable (too few nodes, noise floor, wrap zone)."""

    def __init__(self, message, floor=None):
        self.floor = floor
        if floor is not None:
            message = f"{message} (noise floor {floor:.3e})"
        super().__init__(message)


class ResonanceError(NonlocalDecayError):
    """c_eff - m(xi_k) vanishes at a grid wavenumber."""


class SolverError(NonlocalDecayError):
    """Base class for iteration failures; carries the iteration history."""

    def __init__(self, message, history=None, wave=None):
        self.history = list(history) if history is not None else []
        self.wave = wave
        super().__init__(message)


class NonConvergence(SolverError):
    """Iteration budget exhausted before the residual tolerance was met."""


class TrivialCollapse(SolverError):
    """Iterate collapsed to the trivial solution u = 0."""


class Divergence(SolverError):
    """Iterate grew without bound."""
