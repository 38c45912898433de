"""Toolkit for compact homogeneous spaces G/H with simple isotropy.

Builds matrix Lie algebras and embedding chains, decomposes isotropy
representations, and verifies geodesic-orbit and natural-reductivity
conditions of invariant metrics numerically.
"""

__version__ = "0.1.0"

from .numerics import DEFAULT_POLICY, TolerancePolicy

__all__ = ["DEFAULT_POLICY", "TolerancePolicy", "__version__"]
