"""Exception hierarchy shared by the solvers and the command line."""


class ContractError(ValueError):
    """Base class for errors raised by this package."""


class InvalidInstanceError(ContractError):
    """Raised when an instance fails validation.

    The offending :class:`~bayes_contracts.model.ValidationReport` is kept on
    ``report`` so callers can render every violation, not only the first.
    """

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or f"invalid instance:\n{report.render()}")


class EnumerationCapExceeded(ContractError):
    """Raised when an exponential enumeration would exceed its budget."""

    def __init__(self, what, required, cap):
        self.what = what
        self.required = required
        self.cap = cap
        super().__init__(
            f"{what} requires {required} evaluations but the cap is {cap}; "
            f"raise the cap to at least {required} to run it"
        )
