"""∇-modules: constructors, radii, breaks, Frobenius structures, reduction."""

from .module import (D_DT, DEFAULT_WINDOW, THETA, NablaModule, artin_schreier_module,
                     combine, constant_module, exp_module, h0_h1_dims_unipotent,
                     is_nilpotent, jordan_block_sizes, pullback, trivial_module,
                     unipotent_from_nilpotent)
from .radius import (BreakEstimate, OverconvergenceReport, RadiusProfile, RadiusSample,
                     TaylorSolution, default_budget, derivative_matrices,
                     generic_radius_profile, highest_break_estimate, overconvergence_check,
                     fit_growth, leibniz_expansion, spectral_norm, taylor_solution_matrix)
from .frobenius import (Antecedent, FrobeniusStep, antecedent_residual, frobenius_antecedent,
                        frobenius_structure_iterate, radius_relation)
from .reduction import (Reduction, ReductionCertificate, approximate_reduce,
                        generate_unit_ideal, unimodular_completion)
from .transforms import disc_transform, frobenius_transform, wild_break_transform
