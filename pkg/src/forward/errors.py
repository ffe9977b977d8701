"""Exceptions raised by the forward solver."""


class GeometryError(ValueError):
    """A point lies on the wrong side of the surface or of the measurement line."""


class BoundaryConditionError(ValueError):
    """Invalid or mismatched boundary condition."""


class SingularSystemError(RuntimeError):
    """The assembled boundary-integral system is numerically singular."""

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition
