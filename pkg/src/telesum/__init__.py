"""Law of the sum of two independent telegraph processes."""

__version__ = "0.1.0"
