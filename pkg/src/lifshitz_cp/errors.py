"""Exception types; the CLI maps each to a distinct exit code."""


class ConfigError(ValueError):
    """Invalid material, atom or run configuration."""


class ConvergenceError(RuntimeError):
    """A sum, quadrature or derivative failed to meet its tolerance.

    ``diagnostics`` carries whatever was known at the point of failure.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
