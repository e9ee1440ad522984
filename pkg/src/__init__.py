"""mhsolve - exact solver for multi-homogeneous polynomial systems."""
__version__ = "0.1.0"
