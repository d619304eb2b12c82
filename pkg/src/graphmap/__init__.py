"""Draw graphs as geographic-style maps: clusters become countries."""

__version__ = "0.1.0"
