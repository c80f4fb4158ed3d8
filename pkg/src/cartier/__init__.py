"""Cartier algebras, F-pure submodules and test ideals over F_p."""

__version__ = "0.1.0"
