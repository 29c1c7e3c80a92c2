"""Exception types shared across the package."""


class DIError(Exception):
    """Base class for all package errors."""


class IngestError(DIError, ValueError):
    """A metadata or edge file could not be parsed."""

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"line {line}: "
        elif where:
            where += " "
        super().__init__(where + message)


class ConflictError(IngestError):
    """The same paper id was registered twice with different years."""

    def __init__(self, paper_id, first, second, line=None, source=None):
        self.paper_id = paper_id
        super().__init__(
            f"paper {paper_id!r} registered with conflicting years {first!r} and {second!r}",
            line=line,
            source=source,
        )


class UnknownPaperError(DIError, LookupError):
    def __init__(self, paper_id):
        self.paper_id = paper_id
        super().__init__(f"unknown paper id {paper_id!r}")

    def __str__(self):
        # LookupError would otherwise repr() the message
        return self.args[0]


class UnknownYearError(DIError, ValueError):
    """A focal paper has no publication year, so no window can be anchored."""

    def __init__(self, paper_id):
        self.paper_id = paper_id
        super().__init__(f"focal paper {paper_id!r} has no known publication year")


class ConfigError(DIError, ValueError):
    """Invalid specification, grid, generator or run configuration."""
