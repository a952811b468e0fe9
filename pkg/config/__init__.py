"""Configuration package: environment settings and bundled matrix sets."""
