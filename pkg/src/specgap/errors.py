"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (bad modulus, values outside [0,1], ...)."""


class FieldMismatch(ValueError):
    pass


class SpectrumError(ValueError):
    """A spectrum cannot support the requested operation."""


class HypothesisError(ValueError):
    """An operation's stated preconditions do not hold for this input."""


class NoUniqueDifference(LookupError):
    pass


class ChainError(RuntimeError):
    """The difference chain stopped making progress."""


class MalformedInput(InputError):
    """The document cannot be parsed into an input of a known kind."""


class CompositeModulus(InputError):
    pass


class OutOfRange(InputError):
    """A residue or value lies outside its allowed range."""
