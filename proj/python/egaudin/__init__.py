"""Elliptic Gaudin model bindings."""

from ._core import (
    DomainError,
    EllipticContext,
    NumericalError,
    PoleError,
    acsm_continuation,
    classical_limit,
    couplings,
    enumerate_solutions,
    hamiltonian,
    integral,
    jacobi,
    make_context,
    phi,
    verify,
)

__all__ = [
    "DomainError",
    "EllipticContext",
    "NumericalError",
    "PoleError",
    "acsm_continuation",
    "classical_limit",
    "couplings",
    "enumerate_solutions",
    "hamiltonian",
    "integral",
    "jacobi",
    "make_context",
    "phi",
    "verify",
]
