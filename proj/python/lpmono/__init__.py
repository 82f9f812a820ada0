"""Zero finding for strongly monotone operators in finite-dimensional l_s spaces."""

from ._lpmono import (
    Error,
    Space,
    audit,
    duality_map,
    inverse_duality_map,
    lp_norm,
    modulus_bound,
    phi,
    phi_p,
    run_experiment,
    v_p,
    validate_schedule_prototype,
)

__all__ = [
    "Error",
    "Space",
    "audit",
    "duality_map",
    "inverse_duality_map",
    "lp_norm",
    "modulus_bound",
    "phi",
    "phi_p",
    "run_experiment",
    "v_p",
    "validate_schedule_prototype",
]
