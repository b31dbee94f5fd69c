"""Exception hierarchy shared by the simulator, analysis code and CLI."""


class ValidationError(ValueError):
    """A parameter is outside the range where the computation is defined."""


class ConstraintError(ValidationError):
    """An initial-condition or thermodynamic constraint is violated."""


class DetailedBalanceError(ValidationError):
    """Asymptotic rates do not satisfy w_b * L+ == w_a * L-."""


class PositivityError(ArithmeticError):
    """A reduced density operator lost positivity beyond round-off."""


class ResourceLimitError(RuntimeError):
    """The lattice window would exceed the configured site budget."""


class TooFewPeaksError(ValueError):
    """Envelope extraction found too few extrema on a branch."""


class InsufficientDataError(ValueError):
    """A fit or tail average has too few samples in its window."""


class StepSizeError(ArithmeticError):
    """Integrator truncation estimate exceeded its tolerance."""


class NarrowGaussianWarning(UserWarning):
    """Gaussian initial state narrower than the sigma0 >= 10 regime."""
