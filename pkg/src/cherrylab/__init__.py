"""Properly colored and rainbow copies of graphs with few cherries in bounded colorings."""

__version__ = "0.1.0"
