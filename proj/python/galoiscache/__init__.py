"""Python bindings for the GaloisCache simulator."""

from ._galoiscache import (
    AccessOutcome,
    Cache,
    ConfigError,
    DomainError,
    FieldSpec,
    ScenarioError,
    SkewParams,
    UnsupportedField,
    const_mul_netlist,
    default_modulus,
    is_irreducible,
    permutation_cost,
    run_attack,
    solve_intersection_way,
    verify_diagonalization,
    verify_way_bijection,
)

__all__ = [
    "AccessOutcome",
    "Cache",
    "ConfigError",
    "DomainError",
    "FieldSpec",
    "ScenarioError",
    "SkewParams",
    "UnsupportedField",
    "const_mul_netlist",
    "default_modulus",
    "is_irreducible",
    "permutation_cost",
    "run_attack",
    "solve_intersection_way",
    "verify_diagonalization",
    "verify_way_bijection",
]
