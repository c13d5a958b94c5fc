"""Lorentz singular value decomposition of two-qubit states and its uses.

Normal forms under local filtering, entanglement monotones, a convertibility
test for mixed states, and three-qubit GHZ/W classification and distillation.
"""
__version__ = "0.1.0"

from .convertibility import (BellSpectrum, ConvertVerdict, bell_spectrum, convertible,
                             grid_feasibility, solve_mixing_system)
from .decomposition import (LsvdResult, NormalForm, classify_normal_form,
                            filtering_normal_form_oracle, lorentz_singular_values, lsvd,
                            lsvd_state)
from .distillation import (GhzDistillResult, eigvec_formula_check, ghz_grid_oracle,
                           optimal_ghz_distillation, optimal_w_distillation)
from .exceptions import (ClassError, InternalInconsistency, LorentzSVDError,
                         NormalFormObstruction, NotAStateError, RankError, ValidationError)
from .lorentz import lorentz_to_sl2c, r_to_rho, random_lorentz, rho_to_r, sl2c_to_lorentz
from .monotones import (MonotoneReport, concurrence, monotone_report, monotones_from_spectrum,
                        negativity, variational_sample, wootters_concurrence, wootters_lambda)
from .tripartite import (FilterTriple, Slocc3Class, branch_success_probability, classify3,
                         ghz_filters, ghz_symmetry_family, povm_feasible, three_tangle,
                         w_filters, w_symmetry_family)
