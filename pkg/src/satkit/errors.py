"""Shared error types for file parsing."""


class InputError(ValueError):
    """A malformed input file; carries the path and line of the offence."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line
        self.message = message
