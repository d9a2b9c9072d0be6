"""Exception and warning types shared across the package.

The CLI maps these onto exit codes: bad parameters / domain errors are
``ValueError`` (exit 2), numerical failures are ``NumericError`` (exit 3),
I/O problems surface as ``OSError`` (exit 4).
"""


class NumericError(RuntimeError):
    """A numerical routine failed to meet its accuracy or convergence contract."""


class InsufficientEventsError(NumericError):
    """Too few Monte Carlo events to report a meaningful probability.

    Carries the observed event count and trial count so callers can decide
    whether to enlarge the run or drop the point.
    """

    def __init__(self, events: int, trials: int, minimum: int):
        self.events = events
        self.trials = trials
        self.minimum = minimum
        super().__init__(
            f"only {events} events in {trials} trials "
            f"(need >= {minimum} for a reportable estimate)"
        )


class PrecisionLossWarning(UserWarning):
    """An alternating sum lost significant digits to cancellation."""
