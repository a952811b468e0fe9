"""Utility helpers: error types and text formatting for tables and matrices."""
