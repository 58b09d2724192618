"""Exact toolkit for Langlands-dual root data, central quotients and finite Heisenberg data."""

__version__ = "0.1.0"
