"""Exception hierarchy shared by the whole package."""


class LfgError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(LfgError):
    """A name does not resolve against the signature, or the signature
    itself is unusable (reserved word, non-identifier, ...)."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = "%d:%d: %s" % (line, col, message)
        super().__init__(message)
        self.line = line
        self.col = col


class FormulaSyntaxError(LfgError):
    """Malformed concrete formula syntax.  Carries a 1-based position."""

    def __init__(self, message, line, col):
        super().__init__("%d:%d: %s" % (line, col, message))
        self.line = line
        self.col = col


class GrammarSyntaxError(LfgError):
    """Malformed grammar file.  Carries a 1-based position."""

    def __init__(self, message, line, col):
        super().__init__("%d:%d: %s" % (line, col, message))
        self.line = line
        self.col = col


class GrammarError(LfgError):
    """A structurally broken grammar (empty rule set and the like)."""


class ModelFormatError(LfgError):
    """A model document does not follow the serialization format."""


class UnknownNodeError(LfgError):
    """A node id was passed that is not part of the structure at hand."""
