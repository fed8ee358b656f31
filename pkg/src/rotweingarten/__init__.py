"""Rotational special Weingarten surfaces of minimal type in S^2 x R and H^2 x R.

A surface of revolution whose mean curvature ``H`` and extrinsic curvature
``K_e`` satisfy ``H = f(H^2 - K_e)`` with ``f(0) = 0`` is generated by a
profile curve ``(phi(s), t(s))``.  This package integrates that curve from a
symmetry point, classifies the result (slice, cylinder, catenoidal or
unduloidal) and exports it as CSV, JSON or an OBJ mesh.
"""

__version__ = "0.1.0"

from .elliptic import (DomainError, EllipticFunction, EllipticityReport, GLimits,
                       check_ellipticity, compute_limits, eval_f, eval_f_prime, g, g_bar,
                       invert_g_bar, parse_family)
from .ambient import (H2, S2, Ambient, CurvatureSample, PoleError, ProfileState, c_eps,
                      curvatures, eta_eps, normal_vector, s_eps, solve_phi_pp, weingarten_residual)
from .integrator import (Event, ExistenceGate, GateFailure, Profile, ShootingSpec, Termination,
                         existence_gate, integrate_profile, max_residual, reflect_profile,
                         solve_initial_phi_pp)
from .classifier import (CATENOIDAL, CYLINDER, SLICE, UNDULOIDAL, ClassificationReport,
                         InconsistentProfileError, InsufficientEventsError, TailEstimate,
                         check_symmetry, classify, estimate_period, estimate_t_infinity)
from .config import ConfigError, RunConfig, load_config, parse_config, serialize_config
from .export import mesh_obj, profile_csv, profile_json, to_json
