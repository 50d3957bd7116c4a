"""Flat metrics, WDVV potentials, Frobenius algebras and k-potential submanifolds."""

__version__ = "0.1.0"

from .errors import (BadVariableSupport, ConfigError, DimensionMismatch, GridTooCoarse,  # noqa: E402
                     RangeError, Singular, SingularAssembly, StepTooLarge, UnknownBuiltin)
from .linalg import Inertia, antidiagonal, inertia, invert, symmetric  # noqa: E402
from .potential import (BUILTIN_F, DerivativeTable, Polynomial, assemble_n3, builtin,  # noqa: E402
                        derivative_table, extract_f, fourth_tensor, lift_f, parse_rational,
                        third_tensor)
from .frobenius import (Residual, StructureConstants, associativity_residual, associator,  # noqa: E402
                        commutativity_residual, find_unit, frobenius_algebra, invariance_residual,
                        multiply, structure_constants, wdvv_residual, wdvv_tensor)
from .geometry import (Connection, GaussRicciCheck, GramSpec, SpectralProblem, Weingarten,  # noqa: E402
                       admissible_signatures, ambient_signature, codazzi_check, connection_matrices,
                       curvature_residual, gauss_from_ricci_check, gauss_residual, gauss_tensor,
                       gram_assemble, ricci_residual, ricci_tensor, second_forms, spectral_problem,
                       weingarten)
from .realization import (FrameState, Grid, GridRealization, PathPlan, diagonalizing_transform,  # noqa: E402
                          init_frame, integrate_frame, integrate_path, measured_weingarten,
                          path_independence, realize_grid, verify_first_form, verify_second_forms)
from .hydro import (ABCFields, abc_from_f, eqf_residual, operators_n3, shdt_residual,  # noqa: E402
                    weingarten_n3)
from .config import JobConfig, load_config  # noqa: E402
