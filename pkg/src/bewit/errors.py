"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed argument: bad label, wrong shape, out-of-range index."""


class StructureError(ValueError):
    """A matrix lacks the structure an operation needs (e.g. not GHZ-diagonal)."""


class SamplingExhaustedError(RuntimeError):
    pass


class DegenerateWitnessError(ArithmeticError):
    """The pair-correlation norm vanishes, so the nonlinear angle is undefined."""


class CapacityError(ValueError):
    pass
