"""Run-time failures a simulation can report."""


class NewtonFailure(RuntimeError):
    """The pressure equation did not converge within the iteration budget."""

    def __init__(self, message, residual_history=(), time=None):
        super().__init__(message)
        self.residual_history = list(residual_history)
        self.time = time


class CflViolation(RuntimeError):
    """A wave or transport speed exceeds the stability bound."""

    def __init__(self, message, speed, bound, time=None):
        super().__init__(message)
        self.speed = speed
        self.bound = bound
        self.time = time
