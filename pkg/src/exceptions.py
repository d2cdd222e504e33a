class PotentialDomainError(ValueError):
    """Evaluation requested at a point where the formula is singular or outside its declared region"""


class CompatibilityError(ValueError):
    """Neumann datum whose fluxes do not balance"""


class QuadratureResolutionError(ValueError):
    """Requested modes cannot be resolved by the available nodes"""


class SolverError(RuntimeError):
    """Linear algebra failure: ill-conditioned collocation system, failed eigen-solve, ..."""


class ToleranceBreach(RuntimeError):
    """A verification residual exceeded the configured tolerance"""


class ConfigError(ValueError):

    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"

        super().__init__(message)


# exit codes of the command line harness
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_TOLERANCE_BREACH = 3
EXIT_SOLVER_FAILURE = 4
