"""Norm derivatives, orthogonality relations, and bilinear operator
geometry on finite-dimensional lp spaces."""

from ._core import (
    BilinearOp,
    DomainError,
    InputError,
    Space,
    check_james,
    default_trials,
    in_negative_part,
    in_positive_part,
    is_approx_birkhoff,
    is_b_star,
    is_birkhoff,
    is_operator_approx_birkhoff,
    is_operator_birkhoff,
    is_operator_smooth,
    is_smooth_point,
    is_strong_birkhoff,
    norm,
    operator_norm,
    parse_space,
    rho,
    rho_closed,
    rho_numeric,
    set_max_threads,
    sphere_sample,
    support_set,
    tensor_from_json,
    theorem_description,
    theorem_ids,
    verify_theorem,
)

__all__ = [
    "BilinearOp",
    "DomainError",
    "InputError",
    "Space",
    "check_james",
    "default_trials",
    "in_negative_part",
    "in_positive_part",
    "is_approx_birkhoff",
    "is_b_star",
    "is_birkhoff",
    "is_operator_approx_birkhoff",
    "is_operator_birkhoff",
    "is_operator_smooth",
    "is_smooth_point",
    "is_strong_birkhoff",
    "norm",
    "operator_norm",
    "parse_space",
    "rho",
    "rho_closed",
    "rho_numeric",
    "set_max_threads",
    "sphere_sample",
    "support_set",
    "tensor_from_json",
    "theorem_description",
    "theorem_ids",
    "verify_theorem",
]
