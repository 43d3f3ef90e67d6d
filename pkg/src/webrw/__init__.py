"""webrw: linear reduction systems on abstract and surface-embedded graphs."""

__version__ = "0.1.0"
