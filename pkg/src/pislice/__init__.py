"""A pi-calculus interpreter with Galois-connected forward and backward dynamic slicing."""

__version__ = "0.1.0"
