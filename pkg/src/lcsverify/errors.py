class InputError(ValueError):
    """Malformed input: bad indices, bad literals, wrong shapes."""


class ResourceLimitError(RuntimeError):
    """A configured size cap would be exceeded."""


class PrecisionError(ValueError):
    """A truncation cap is too small for the requested answer."""
