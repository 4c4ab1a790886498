"""Exception types shared across the toolkit."""


class BwslexError(Exception):
    """Base class for all toolkit errors."""


class FormatError(BwslexError, ValueError):
    """A file does not conform to its documented format."""


class DataError(BwslexError, ValueError):
    """Input records are inconsistent: unknown references, invalid values."""


class DesignInfeasibleError(BwslexError, ValueError):
    """The requested annotation design cannot satisfy its constraints."""
