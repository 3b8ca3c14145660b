"""Multizeta values, Carlitz multiple polylogarithms and their identities over F_q[theta]."""

__version__ = "0.1.0"
