"""Isomorphism of free-by-(finite cyclic) groups and free-by-cyclic groups with centre."""

__version__ = "0.1.0"
