"""Exact computations with Drinfeld modular forms for Gamma_0(T)."""

from .algebra import FieldParams, FqElem, TPoly, monic_polys
from .errors import *  # noqa: F401,F403
from .series import USeries

__version__ = "0.1.0"
