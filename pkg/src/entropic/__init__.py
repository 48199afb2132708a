"""Entropic magmas: bracket and Tutte-style invariants, entropic homology, extensions."""

from .magma import (
    CheckResult,
    EventualSequence,
    FiniteMagma,
    MagmaError,
    MagmaFamily,
    Partition,
    affine_magma,
    check_4move_condition,
    check_bracket_conditions,
    congruence_closure,
    is_compatible_family,
    is_entropic,
    quotient_magma,
    toyoda_decompose,
)
from .links import LinkDiagram, bracket, resolve_leaves
from .graphs import SignedGraph, tutte_value
from .tait import PlaneGraph, medial_link
from .chains import TupleChain, homology, hat_homology
from .extensions import AffineAction, second_cohomology

EXAMPLE_TABLE = ((2, 1, 3, 4), (1, 4, 3, 2), (3, 3, 3, 3), (4, 2, 3, 1))


def example_magma() -> FiniteMagma:
    """The order-4 entropic magma used throughout the docs, row = left operand."""
    return FiniteMagma(EXAMPLE_TABLE)


def example_sequence() -> EventualSequence:
    return EventualSequence.repeat(1, 2, 4)


__version__ = "0.1.0"
