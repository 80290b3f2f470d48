"""Dirac brackets, dressing actions and factorization dynamics on T*SL(2,C)."""

from . import aks, dirac, doublegroup, linalg, sl2c, sl2c_example, verify

__version__ = "0.1.0"

__all__ = ["aks", "dirac", "doublegroup", "linalg", "sl2c", "sl2c_example", "verify"]
