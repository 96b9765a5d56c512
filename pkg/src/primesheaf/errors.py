"""Exception hierarchy shared by the library and the CLI."""


class AlgebraError(Exception):
    """Base class for every error raised by primesheaf."""


class MixedRingError(AlgebraError, TypeError):
    """Operands live in different base rings."""


class AmbientMismatchError(AlgebraError, ValueError):
    """Submodules or opens with different ambient modules were combined."""


class PreconditionError(AlgebraError, ValueError):
    """A hypothesis of the requested construction does not hold."""


class GuardExceededError(AlgebraError):
    """An enumeration would produce more objects than the configured guard."""


class NotACoverError(AlgebraError, ValueError):
    """The proposed opens do not cover the target open."""


class IncompatibleSectionsError(AlgebraError, ValueError):
    """Local sections disagree on an overlap and cannot be glued."""

    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class WorkspaceError(AlgebraError, ValueError):
    """Malformed workspace input; carries an optional line/column position."""

    def __init__(self, msg, line=None, column=None):
        if line is not None:
            msg = f"{msg} (line {line}, column {column})"
        super().__init__(msg)
        self.line = line
        self.column = column


class DanglingReferenceError(WorkspaceError):
    pass


class RaggedMatrixError(WorkspaceError):
    pass
