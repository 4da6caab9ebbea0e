"""Exception types shared across the package."""
from __future__ import annotations


class E8KSError(Exception):
    """Base class for all package-specific errors."""


class DegreeAnomaly(E8KSError):
    """The orthogonality graph is not 63-regular at the given threshold."""


class FixtureCorrupt(E8KSError):
    """A bundled permutation or seed-block fixture failed validation."""


class CollisionError(E8KSError):
    """Two distinct labels generated the same basis."""


class RealizationMismatch(E8KSError):
    """A matrix fixture does not induce the expected ray permutation."""


class NonOrthogonalRequired(E8KSError):
    """The two anchor rays must not be orthogonal."""


class InsufficientPairs(E8KSError):
    """A seed subset does not admit the required complementary basis pairs."""


class ExtensionFailure(E8KSError):
    """A half-and-half pair selection cannot be extended to a parity proof."""


class AmbiguousPairing(E8KSError):
    """A ray co-occurs with more than one constant companion.

    Carries the maximal co-occurrence classes so callers can report them.
    """

    def __init__(self, classes: tuple[tuple[int, ...], ...]):
        self.classes = classes
        super().__init__(f"ambiguous rank-2 pairing in classes {classes}")


class TimeoutExceeded(E8KSError):
    """The colorability solver ran out of its node budget."""

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"solver node budget exhausted after {nodes} nodes")


class BudgetExceeded(E8KSError):
    """An enumeration exceeded a configured size cap."""
