"""Exception hierarchy shared by every module."""


class MDLError(Exception):
    """Base class for all library errors."""


class InvalidInputError(MDLError, ValueError):
    pass


class DegenerateDesignError(MDLError, ValueError):
    """Raised when a regression design has a singular Gram matrix."""


class InvalidLuckinessError(MDLError, ValueError):
    pass


class UnsupportedPriorError(MDLError, ValueError):
    pass


class ComplexityDivergesError(MDLError, ValueError):
    """The NML normalizer is infinite for this family/luckiness pair."""


class NoDataRemainingError(MDLError, ValueError):
    pass


class UndefinedStartError(MDLError, ValueError):
    """Plug-in ML prediction requested with an empty history on discrete data."""


class UnsupportedCompositeError(MDLError, ValueError):
    """Composite nulls need a reverse information projection, which is not provided."""


class UnsupportedCardinalityError(MDLError, ValueError):
    pass
