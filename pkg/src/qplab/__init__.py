"""qplab: p-subgroup posets of finite groups with exact rational homology.

Subgroup-poset builders (Brown, Quillen, Bouc, and their retracts),
replacement posets with modified orders, shuffle-product homology
propagation, and Lefschetz/Robinson fixed-point certificates, all at
desk scale over fully enumerated permutation groups.
"""

from .errors import (
    BadOvergroup, CapExceeded, ConclusionFailed, CycleDetected,
    DegreeMismatch, HypothesisFailed, InvalidSpec, NoInfimum,
    NotOrderPreserving, NotUpwardClosed, PreconditionFailed,
    TransitivityViolation,
)

__all__ = [
    "BadOvergroup", "CapExceeded", "ConclusionFailed", "CycleDetected",
    "DegreeMismatch", "HypothesisFailed", "InvalidSpec", "NoInfimum",
    "NotOrderPreserving", "NotUpwardClosed", "PreconditionFailed",
    "TransitivityViolation",
]

__version__ = "0.1.0"
