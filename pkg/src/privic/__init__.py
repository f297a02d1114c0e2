"""Exact tools for private index coding: verifiers, a brute-force oracle, bounds and constructions."""

from .feasibility import canonical_scheme, is_feasible
from .model import (KeyAccessStructure, KeyPattern, LinearScheme, MulticastScheme, RateTuple, SideInfoGraph,
                    all_patterns)
from .oracle import oracle_check_multicast, oracle_check_private, oracle_check_weak
from .verifier import scheme_rate, verify_private, verify_weak_private

__version__ = "0.1.0"

__all__ = [
    "KeyAccessStructure", "KeyPattern", "LinearScheme", "MulticastScheme", "RateTuple", "SideInfoGraph",
    "all_patterns", "canonical_scheme", "is_feasible", "oracle_check_multicast", "oracle_check_private",
    "oracle_check_weak", "scheme_rate", "verify_private", "verify_weak_private",
]
