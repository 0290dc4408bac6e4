"""Exception hierarchy.

Every domain error carries a machine-readable ``code`` (the class name) and an
optional JSON-serializable ``witness`` describing what failed.
"""


class MultifoliateError(Exception):
    """Base class for all domain errors raised by the library."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.message = message
        self.witness = witness

    @property
    def code(self):
        return type(self).__name__

    def to_json(self):
        out = {"code": self.code, "message": self.message}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


# posets
class CycleError(MultifoliateError):
    pass


class PosetTooLarge(MultifoliateError):
    pass


class UnknownElement(MultifoliateError):
    pass


# linear algebra
class DimensionMismatch(MultifoliateError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


# projective systems
class CoherenceError(MultifoliateError):
    pass


class NotEpimorphism(MultifoliateError):
    pass


class MissingMap(MultifoliateError):
    pass


class InvarianceFailure(MultifoliateError):
    pass


class PosetMismatch(MultifoliateError):
    pass


# multifoliate structures
class NotSurjective(MultifoliateError):
    pass


class BadIndex(MultifoliateError):
    pass


class SizeMismatch(MultifoliateError):
    pass


# classification
class NotComplete(MultifoliateError):
    pass


class NoGreatestElement(MultifoliateError):
    pass


class BasisIncomplete(MultifoliateError):
    pass


class AmbiguousMinimal(MultifoliateError):
    pass


# Weil algebras
class NotAssociative(MultifoliateError):
    pass


class NotCommutative(MultifoliateError):
    pass


class NotUnital(MultifoliateError):
    pass


class NotNilpotent(MultifoliateError):
    pass


class NotMultiplicative(MultifoliateError):
    pass


class ArityMismatch(MultifoliateError):
    pass


class CompatibilityViolation(MultifoliateError):
    pass


# input decoding (CLI exit code 2)
class SchemaError(MultifoliateError):
    pass
