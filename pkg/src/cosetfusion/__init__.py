"""Exact minimal-model data, fusion rings, commutant fusion rules and q-series characters."""

from .kac import MinimalModel, PrimaryField, central_charge, conformal_weight, enumerate_primaries
from .fusion import FusionRing, check_axioms, fuse, is_admissible, minimal_model_fusion
from .modular import ModularData, s_matrix, total_dim_squared, verlinde_fusion
from .commutant import BranchingTable, check_product_structure, derive_commutant_ring, validate
from .qseries import QSeries, eta_inverse_series, eta_series, theta_sqrt2_e8
from .characters import evaluate, minimal_character, verify_e8_decomposition, verify_weight_positivity

__version__ = "0.1.0"
