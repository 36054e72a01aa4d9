"""CLI tool for hj-partition."""

__version__ = "0.1.0"
