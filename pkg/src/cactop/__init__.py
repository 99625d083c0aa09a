"""Exact combinatorics of cacti, overlapping intervals and framed
configuration spaces, with the cactus action on aligned maps."""

__version__ = "0.1.0"
