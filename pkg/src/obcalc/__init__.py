"""Open book decompositions at the level of homology, binding sums and contact checks."""

__version__ = "0.1.0"
