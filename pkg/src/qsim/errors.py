"""Exception types shared across the package."""


class QsimError(Exception):
    """Base class for package-specific failures."""


class AssumptionError(QsimError):
    """Input data violates a modelling assumption (positivity, domain, ...)."""


class ZeroBranchError(QsimError):
    """Post-selection on a branch whose probability is numerically zero."""
