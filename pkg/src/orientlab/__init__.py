"""Strong orientations of vertex-multiplied cartesian products: constructions, verification and search."""

__version__ = "0.1.0"
