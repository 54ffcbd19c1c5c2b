"""Planar compacta on a grid: holes, hulls, winding numbers, polynomial
extensions and single generators of function algebras."""

__version__ = "0.1.0"
