"""Error taxonomy shared across the package and the CLI."""


class SchemaError(ValueError):
    """Malformed input: bad JSON shape, unknown ids, invalid values."""


class PreconditionError(ValueError):
    """Mathematically valid input outside an operation's domain."""


class FiltrationError(RuntimeError):
    """A graded image escaped the filtration; indicates a convention bug."""
