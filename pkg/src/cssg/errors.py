"""Exception types shared across the cssg package."""


class CssgError(Exception):
    """Base class for all cssg-specific errors."""


class UnsupportedLanguage(CssgError):
    """Requested language has no frontend built in."""


class ParseFailure(CssgError):
    """The grammar could not produce any tree for the input."""


class BudgetExceeded(CssgError):
    """Combined graph size is over the exact-solver budget."""


class OracleTooLarge(CssgError):
    """Graph pair is too big for exhaustive mapping enumeration."""


class EmptyInput(CssgError):
    """A metric received an empty reference where one is required."""


class EmptyCorpus(CssgError):
    """No valid submissions could be read from the corpus file."""


class DegenerateVariance(CssgError):
    """A statistic is undefined because the pooled variance is zero."""
