"""Fault finding and fault-history analysis for C source trees."""

__version__ = "0.1.0"
