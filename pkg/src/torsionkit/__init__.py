"""Exact and certified numerics for Lerch-zeta asymptotics and equivariant torsion."""

__version__ = "0.1.0"
