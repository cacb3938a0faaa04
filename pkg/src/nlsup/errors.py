"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


class PreconditionError(ValueError):
    """An input does not satisfy the structural hypothesis of an operation."""


class EmptySetError(ValueError):
    """An operation that needs a non-empty set received an empty one."""


class UntrustedScheduleError(ValueError):
    """A level schedule reaches sublevel sets clipped by the grid boundary."""


class HullNotConverged(RuntimeError):
    """A grid hull sweep hit its iteration cap before reaching a fixed point."""


class InclusionError(ValueError):
    """A function fails the nonlocal pair constraint it was required to satisfy."""


class CapacityError(ValueError):
    """An enumeration would exceed its configured size cap."""


class ParseError(ValueError):
    """An input file does not follow the expected format."""
