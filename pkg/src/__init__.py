"""Citation-flow trade indicators between scientific fields."""

__version__ = "1.0.0"
