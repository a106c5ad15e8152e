class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """Numerical quadrature failed to reach its target accuracy.

    Carries the last two estimates so callers can report them.
    """

    def __init__(self, message: str, coarse: float, fine: float):
        super().__init__(f"{message} (coarse={coarse!r}, fine={fine!r})")
        self.coarse = coarse
        self.fine = fine
