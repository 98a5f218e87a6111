"""Exception hierarchy shared by all afclip modules."""


class AfclipError(Exception):
    """Base class for every error raised by this package."""


class GeometryError(AfclipError, ValueError):
    pass


class NonConvexError(GeometryError):
    pass


class OpenSurfaceError(GeometryError):
    pass


class DegenerateFacetError(GeometryError):
    pass


class DegenerateProjectionError(GeometryError):
    pass


class DegenerateHullError(GeometryError):
    pass


class ZeroDirectionError(GeometryError):
    pass


class NotAxisParallelError(GeometryError):
    pass


class LengthMismatchError(AfclipError, ValueError):
    pass


class ParseError(AfclipError, ValueError):
    """Malformed mesh file. ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class UnsupportedFormatError(AfclipError, ValueError):
    pass


class CacheError(AfclipError):
    pass


class VersionMismatchError(CacheError):
    pass


class ChecksumMismatchError(CacheError):
    pass
