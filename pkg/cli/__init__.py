"""Command-line front end for the bound suite."""

__version__ = "0.1.0"
