"""Exception types shared across the package."""


class CapExceededError(ValueError):
    """Input is larger than the dense-simulation limits allow."""


class ProtocolError(RuntimeError):
    """A protocol engine was driven out of order or with an invalid script."""


class CodeSearchError(RuntimeError):
    """Random search failed to produce a code with the requested parameters."""


class AttackPreconditionError(ValueError):
    """The preconditions an attack relies on do not hold for this input."""
