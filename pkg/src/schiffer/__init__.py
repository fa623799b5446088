"""Schiffer comparison operators, jump operators and transmission on the sphere and tori."""
__version__ = "0.1.0"
