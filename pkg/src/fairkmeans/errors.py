"""Package-specific exceptions."""

from __future__ import annotations


class InfeasibleInstanceError(Exception):
    """Greedy seeding needed more than k anchors, so no k-center set can
    satisfy the radius bounds.

    Attributes
    ----------
    anchors_needed : int
        Number of anchors the seeding procedure produced.
    k : int
        The requested number of centers.
    """

    def __init__(self, anchors_needed: int, k: int):
        self.anchors_needed = anchors_needed
        self.k = k
        super().__init__(
            f"instance is infeasible: seeding produced {anchors_needed} "
            f"anchors but only k={k} centers are allowed"
        )
