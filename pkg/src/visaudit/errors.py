"""Exception types. The CLI maps these onto exit codes."""


class VisauditError(Exception):
    """Base class for toolkit errors."""


class UsageError(VisauditError, ValueError):
    """Bad arguments, unknown format tags, missing required inputs."""


class DataError(VisauditError, ValueError):
    """Input data that cannot support the requested computation."""


class EmptyInputError(DataError):
    pass


class ConvergenceError(DataError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual norm {residual:.3e})")
        self.residual = residual


class OrientationError(DataError):
    pass
