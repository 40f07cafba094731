"""Exact Weil representations of the metaplectic group attached to integer
lattices: discriminant forms, 2-adic and odd-p Jordan invariants, Kubota
cocycle bookkeeping, and the closed operator formulas with their oracles."""

from .exact import (
    ExactScalar,
    eval_numeric,
    from_rational,
    root_of_unity,
    sqrt_rat,
)

__all__ = [
    "ExactScalar",
    "eval_numeric",
    "from_rational",
    "root_of_unity",
    "sqrt_rat",
]

__version__ = "0.1.0"
