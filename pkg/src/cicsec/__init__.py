"""Secrecy rate regions of the cognitive interference channel with partial state information."""

__version__ = "0.1.0"
