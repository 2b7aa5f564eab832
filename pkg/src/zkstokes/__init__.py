"""Exact combinatorial Stokes and Tucker machinery for the cyclic group Z_k."""

from .ring import RingSpec, Z, GroupRingElement, special_element, evaluate, augment, coords_in_basis
from .simplicial import SimplicialComplex, SimplicialChain, GroupAction, JoinVertex
from .labelling import Labelling

__version__ = "0.1.0"

__all__ = [
    "RingSpec",
    "Z",
    "GroupRingElement",
    "special_element",
    "evaluate",
    "augment",
    "coords_in_basis",
    "SimplicialComplex",
    "SimplicialChain",
    "GroupAction",
    "JoinVertex",
    "Labelling",
]
