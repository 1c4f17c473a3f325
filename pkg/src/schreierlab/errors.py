class SchreierLabError(Exception):
    """Base class for errors raised by this package."""


class NonCanonicalOrdinal(SchreierLabError, ValueError):
    pass


class NotAMember(SchreierLabError, ValueError):
    pass


class BudgetExceeded(SchreierLabError, RuntimeError):
    """A configured resource cap would be exceeded; nothing was truncated."""


class ConfigError(SchreierLabError, ValueError):
    pass
