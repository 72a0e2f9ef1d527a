"""Exception hierarchy shared by the library and the command line."""


class HostRolesError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ValidationError(HostRolesError, ValueError):
    """Malformed input: bad host token, self-pair, dangling endpoint, bad config."""

    exit_code = 1


class ParseError(ValidationError):
    """An edge-list or document line could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class AlignmentError(HostRolesError):
    """Two snapshots share no hosts, so there is nothing to correlate."""

    exit_code = 3
