class FppError(Exception):
    """Base class of all errors raised by this package."""


class ParameterError(FppError, ValueError):
    """A user supplied parameter is outside of its documented range."""


class ContractError(FppError):
    """An input violates the invariants of its type, or an internal invariant broke."""


class CapacityError(FppError):
    """The requested computation exceeds the exact-solve budget."""


class DegenerateChainError(FppError):
    """The Markov chain or the closed form is degenerate for these parameters."""


class EstimationError(FppError):
    """A Monte Carlo estimator could not produce an estimate."""


class VerificationFailure(FppError):
    """A verifier found mismatches or bound violations."""
