class InputError(ValueError):
    """Malformed input: shapes, rings, names, file contents."""


class UnsupportedRingError(InputError):
    """The operation is only defined over a field."""
