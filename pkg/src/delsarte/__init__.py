"""Delsarte extremal problems on locally compact abelian groups, made finite.

Exact and float LP solvers for the Delsarte problem on finite abelian
groups with primal/dual certificates, positive definiteness tests, the
positive definite constructions behind strong duality, and two-sided
bounds on Z and Z^2.
"""
from __future__ import annotations

from ._scalars import Verdict
from .constructions import (check_kernel, pd_minorant_decompose, sign_swap, triangle_function,
                            urysohn_pd_kernel)
from .functionals import (MeasureFunctional, in_joint_dual, in_P_dual, in_QA_dual, is_positive_type,
                          measure_norm_M, mixed_norm_X, pair)
from .groups import GroupSpec, LatticeTiling, Region, make_group, symmetrize_region
from .lp_duality import (DualCertificate, GapCertificate, Instance, build_dual, build_primal,
                         certify_no_gap, delsarte_constant, make_instance, solve, solve_instance,
                         verify_dual_certificate)
from .simplex import LPProblem, LPSolution, solve_lp
from .spectral import (GroupFunction, Spectrum, convolve, inverse_transform, is_positive_definite,
                       is_strictly_pd, transform, trig_poly_min_certified)
from .zd_bounds import dual_upper_bound, primal_lower_bound, sandwich, verify_zd_certificate

__version__ = "0.1.0"
