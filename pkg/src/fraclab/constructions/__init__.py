"""Explicit families: step fields, the mollified family and the blow-up family."""

from .cutoff import shell_cutoff, smooth_step
from .steps import StepFamily, exterior_kernel_mass, make_step_family, step_field
from .mollified import (
    MollifiedFamily, beta, f_lambda, f_limit, limit_integrand, make_v_j, make_w_lambda,
    outer_cutoff_field,
)
from .blowup import (
    BlowupFamily, KDerivatives, K_derivatives, K_lambda_B2, K_lambda_eval, choose_R,
    delta0_and_rescale, estimate_c3, estimate_c4, hessian_terms_at_origin, make_u_lambda,
    radius_conditions, shifted_ball_grid,
)

__all__ = [
    "smooth_step", "shell_cutoff", "StepFamily", "exterior_kernel_mass", "make_step_family",
    "step_field", "MollifiedFamily", "beta", "f_lambda", "f_limit", "limit_integrand",
    "make_v_j", "make_w_lambda", "outer_cutoff_field", "BlowupFamily", "KDerivatives",
    "K_derivatives", "K_lambda_B2", "K_lambda_eval", "choose_R", "delta0_and_rescale",
    "estimate_c3", "estimate_c4", "hessian_terms_at_origin", "make_u_lambda",
    "radius_conditions", "shifted_ball_grid",
]
