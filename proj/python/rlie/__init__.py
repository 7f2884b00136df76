"""Restricted Lie algebras over F_p, their cohomology and finite group schemes."""

from ._core import (
    Algebra,
    DimensionError,
    Error,
    Hopf,
    InputError,
    PreconditionError,
    ResourceError,
    build,
    catalog,
    cohomology,
    constant_group_scheme,
    enveloping,
    is_simple,
    killing_radical_dim,
    restricted_h2,
    run_cli,
    verify_lie,
    verify_restricted,
)

__all__ = [
    "Algebra",
    "DimensionError",
    "Error",
    "Hopf",
    "InputError",
    "PreconditionError",
    "ResourceError",
    "build",
    "catalog",
    "cohomology",
    "constant_group_scheme",
    "enveloping",
    "is_simple",
    "killing_radical_dim",
    "restricted_h2",
    "run_cli",
    "verify_lie",
    "verify_restricted",
]
