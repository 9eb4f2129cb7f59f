"""Groups acting on spherically homogeneous rooted trees."""

__version__ = "0.1.0"
