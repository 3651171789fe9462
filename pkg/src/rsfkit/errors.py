"""Exception hierarchy shared by every rsfkit module."""

from __future__ import annotations


def format_path(path) -> str:
    """Render a subterm path (tuple of child indices) as ``/0/1``; root is ``/``."""
    return "/" + "/".join(str(i) for i in path)


class RsfError(Exception):
    """Base class for all rsfkit errors."""


class ShapeMismatch(RsfError):
    """A host function was applied to a value of the wrong shape."""


class TypeMismatch(RsfError):
    def __init__(self, message: str, path=()):
        self.path = tuple(path)
        super().__init__(f"{message} at {format_path(self.path)}")


class NotReadable(RsfError):
    def __init__(self, rid: int):
        self.rid = rid
        super().__init__(f"resource {rid} is not readable")


class NotWritable(RsfError):
    def __init__(self, rid: int):
        self.rid = rid
        super().__init__(f"resource {rid} is not writable")


class NotReadableAbstract(RsfError):
    def __init__(self, rid: int, found, path=()):
        self.rid = rid
        self.found = found
        self.path = tuple(path)
        super().__init__(
            f"resource {rid} is not readable (tag {found}) at {format_path(self.path)}"
        )


class NotWritableAbstract(RsfError):
    def __init__(self, rid: int, found, path=()):
        self.rid = rid
        self.found = found
        self.path = tuple(path)
        super().__init__(
            f"resource {rid} is not writable (tag {found}) at {format_path(self.path)}"
        )


class ArityMismatch(RsfError):
    pass


class ValueTypeMismatch(RsfError):
    pass


class OutputMissing(RsfError):
    def __init__(self, rid: int):
        self.rid = rid
        super().__init__(f"output resource {rid} was not written")


class LayoutError(RsfError):
    pass


class NotEffectFree(RsfError):
    def __init__(self, path=()):
        self.path = tuple(path)
        super().__init__(f"term accesses a resource at {format_path(self.path)}")


class NotWellTyped(RsfError):
    pass


class NotCollapsed(RsfError):
    pass


class ParseError(RsfError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")
