"""Orthogonal arrays and equitable partitions of the binary hypercube."""

from oa_forge.cube import SpectrumVector, VertexSet, Word, neighbors, subcube_count, walsh_hadamard

__all__ = [
    "SpectrumVector",
    "VertexSet",
    "Word",
    "neighbors",
    "subcube_count",
    "walsh_hadamard",
]

__version__ = "0.1.0"
