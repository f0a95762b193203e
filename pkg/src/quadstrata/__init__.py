"""Residues of primitive meromorphic quadratic differentials.

``oracle.decide`` answers realizability questions, ``constructors`` builds
flat-surface witnesses, ``surface.verify`` recomputes their invariants and
``search`` enumerates normal forms of surfaces with double poles only.
"""

from .core import (
    WHOLE,
    ComponentSelector,
    GaussianRational,
    QuadStrataError,
    RootedResidueConfig,
    StratumSignature,
    max_disjoint_cylinders,
    stratum_nonempty_holomorphic,
    validate_signature,
)
from .constructors import Witness, construct, witness_catalog
from .oracle import Verdict, classify, decide
from .search import enumerate_normal_forms, first_witness
from .surface import FlatSurface, LocalInvariants, verify

__all__ = [
    "WHOLE",
    "ComponentSelector",
    "FlatSurface",
    "GaussianRational",
    "LocalInvariants",
    "QuadStrataError",
    "RootedResidueConfig",
    "StratumSignature",
    "Verdict",
    "Witness",
    "classify",
    "construct",
    "decide",
    "enumerate_normal_forms",
    "first_witness",
    "max_disjoint_cylinders",
    "stratum_nonempty_holomorphic",
    "validate_signature",
    "verify",
    "witness_catalog",
]

__version__ = "0.1.0"
