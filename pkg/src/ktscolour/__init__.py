"""Construct, verify and colour Kirkman triple systems and related designs."""

__version__ = "0.1.0"
