"""Reproducing kernels built by integrating parametrized kernel families over
a discrete measure, with sampling reconstruction, Tikhonov inverse solves and
power-function error bounds."""
from .errors import (ArgumentError, ConditioningError, DegenerateNodeError, DomainError,
                     EvaluationError, InvariantViolation, KernelSynthError, NumericalFailure)
from .measure import (ParamMeasure, Provenance, compensated_sum, from_atoms, gauss_legendre,
                      integrate, trapezoid, truncated_domain, weighted_sum, weighted_transform)
from .kernel import (GramMatrix, Kernel, KernelProvenance, PSDReport, cauchy_schwarz_audit,
                     gram, gram_to_csv, psd_check, read_gram_csv)
from .synthesis import (ExpansionSpec, KernelFamilySpec, RadialProfile, TransformKernelSpec,
                        cosine_basis, cosine_transform_kernel, expansion_kernel,
                        fourier_transform_kernel, gaussian_kernel, gaussian_scale_mixture,
                        integrate_kernel_family, integrate_transform_kernel,
                        paley_wiener_kernel, paley_wiener_transform, radial_to_kernel,
                        schoenberg_rbf, sobolev_kernel)
from .sampling import (OrthogonalityReport, SamplingScheme, integer_nodes, kramer_reconstruct,
                       kramer_reconstruct_many, orthogonality_check,
                       reconstruction_error_profile)
from .inverse import (InverseProblem, InverseSolution, Preimage, forward_apply, l2_norm_sq,
                      normal_residual, objective_audit, preimage, solve_tikhonov)
from .error_bounds import (PowerReport, PreimageModel, RepresenterFunction, embedding_check,
                           min_norm_interpolant, pointwise_bound, power_function, power_values)
from .specs import kernel_from_spec, measure_from_spec, transform_from_spec
from .audit import run_audit

__version__ = "0.1.0"
