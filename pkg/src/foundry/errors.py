"""Exception types shared across the package."""


class FoundryError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class ParseError(FoundryError):
    """Malformed input: a word, a JSON document or a relation file."""

    exit_code = 1


class MalformedWord(ParseError):
    """A word that does not parse over the given generators."""


class PreconditionError(FoundryError):
    """An operation was called outside its domain."""

    exit_code = 2


class DimensionMismatch(PreconditionError):
    """A vector or morphism does not fit the group it is used with."""


class InconsistentRelation(PreconditionError):
    """An additive relation that would force a unit to be zero."""


class AxiomViolation(PreconditionError):
    """A set system that fails the matroid axioms; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(FoundryError):
    """A search exceeded its node budget."""

    exit_code = 3


class VerificationFailure(FoundryError):
    """Two computations that must agree did not."""

    exit_code = 4
