"""Geometric view of binary-search-tree access: GreedyArb, an exact
minimum-augmentation oracle, and empirical checks of its O(log n) analysis."""

from .geometry import (
    AugmentedSet,
    Instance,
    InstanceError,
    Point,
    PreconditionError,
    is_pair_satisfied,
    is_satisfied,
    is_satisfied_reference,
    unsatisfied_pairs,
    unsatisfied_pairs_reference,
)
from .greedy import GreedyTrace, added_count, greedy_step, run

__version__ = "0.1.0"
