"""Exact operator algebra for orthogonal Howe duality checks.

Constructs boundary (dynamical) Weyl groups, fusion and B-operators,
R/K-matrices, KZ/Casimir-type connections and qKZ difference operators in
concrete finite-dimensional representations on fermionic Fock spaces, and
verifies their defining identities -- exactly in Gaussian-rational
arithmetic wherever the values are rational, to certified tolerance where
Gamma/Beta/sine factors enter.
"""
from ._backend import BACKEND
from .linop import LinOp
from .fock import FockSpace
from .scalar import QQi

__all__ = ["BACKEND", "LinOp", "FockSpace", "QQi"]
__version__ = "0.1.0"
