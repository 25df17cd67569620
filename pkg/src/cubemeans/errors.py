"""Exception types shared across the toolkit."""

from __future__ import annotations


class CubemeansError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(CubemeansError):
    """A JSON document does not match the documented schema."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{message}" + (f" (at {location})" if location else ""))


class NonGroupTable(SchemaError):
    """A multiplication table violates the group axioms."""


class LetterOutsideAlphabet(CubemeansError):
    """A word contains a letter outside the declared alphabet."""


class CapExceeded(CubemeansError):
    """An enumeration exceeded the configured element cap."""

    def __init__(self, cap: int, reached: int):
        self.cap = cap
        self.reached = reached
        super().__init__(f"cap of {cap} elements exceeded (reached {reached})")


class MixedContexts(CubemeansError):
    """Two vectors over different group contexts were combined."""


class ZeroMass(CubemeansError):
    """Normalized restriction to a set of mass zero."""


class PartialMap(CubemeansError):
    """A map was not total on the support it must cover."""


class NonEquivariantPartition(CubemeansError):
    """The group element does not permute the partition blocks."""


class DegenerateAmalgam(CubemeansError):
    """The amalgam does not satisfy the nondegeneracy hypothesis."""


class BoundaryVertex(CubemeansError):
    """The requested vertex is too close to the truncation boundary."""


class InsufficientInterior(CubemeansError):
    """The ball's interior is too small for the requested analysis."""


class UnknownSuite(CubemeansError):
    """The verification suite name is not recognized."""


class SupportOutsideBall(CubemeansError):
    """A vector's support acts outside the constructed ball."""
