"""Exception hierarchy.  Every error raised on purpose by the package derives from :class:`AmenError`."""


class AmenError(Exception):
    exit_code = 3


class SchemaError(AmenError):
    """Missing or ill-typed field in an instance document; ``path`` is a JSON path."""

    exit_code = 2

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class SemanticError(AmenError):
    pass


class AuditFailure(AmenError):
    exit_code = 4


class MalformedTable(SemanticError):
    pass


class NotAGroup(SemanticError):
    pass


class DomainMismatch(SemanticError):
    pass


class Unclassifiable(SemanticError):
    pass


class NonBijectiveInGroupMode(SemanticError):
    pass


class NonBijectiveMap(SemanticError):
    pass


class WindowTooSmall(AmenError):
    pass


class NotExact(AmenError):
    pass


class NotInfeasible(AmenError):
    pass


class ShapeMismatch(AmenError):
    pass


class MapNotInFamily(SemanticError):
    pass


class EmptyPiece(SemanticError):
    pass


class SymbolicCarrier(AmenError):
    pass


class VerificationFailed(AuditFailure):
    pass
