"""Pseudospectral cubic NLS toolkit: Gevrey norms, analyticity-radius
tracking, dispersive-norm audits, and the radius lower-bound bookkeeping."""

__version__ = "0.1.0"

from .grid import Field, FourierGrid
from .spectral import (apply_multiplier, dealiased_triple_product, exp_gevrey,
                       forward_transform, free_propagator, gradient_magnitude,
                       inverse_transform, japanese_bracket, l4_norm, Multiplier)
from .norms import (a_sigma, energy, gevrey_norm, GevreyParams, mass,
                    norm_report, NormReport, radius_estimate, RadiusEstimate)
from .integrator import (evolve, linear_half_step, nonlinear_step,
                         SolverConfig, strang_step, Trajectory)
from .bookkeeper import (BookkeeperParams, InductionTrace, local_delta,
                         radius_floor, run_induction, sigma_for_T)
from .spacetime import SpaceTimeSpectrum, xsb_norm
from .audits import (audit_f_estimate, audit_gagliardo_nirenberg,
                     audit_multiplier_inequality, audit_trilinear, AuditReport,
                     f_of_v, sigma_halving_ratio)
