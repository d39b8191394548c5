"""Exact computations with finite-dimensional Leibniz algebras and their products."""

from .algebra import (Algebra, PointedDoubleDerivation, anti_derivations, center, derivations,
                      derived_subspace, double_derivation_check, double_derivations, is_abelian,
                      is_lie, is_perfect, is_subalgebra, is_two_sided_ideal, leibniz_check, quotient,
                      subalgebra)
from .complements import (canonical_matched_pair, classify_deformation_maps, deformation_check,
                          deformations_equivalent, enumerate_deformation_maps, factorization_index,
                          graph_complement, r_deformation)
from .errors import (AxiomError, BudgetExceeded, LeibnizError, NotLeibnizError, ParseError,
                     ShapeError, UnsupportedEnumeration)
from .field import Field
from .flags import (FlagDatum1, FlagDatum2, classify_flags, enumerate_flag_datums, flag1_check,
                    flag2_check, flag_check, flag_product, flags_equivalent, make_flag1, make_flag2)
from .linalg import Subspace, kernel, rank, rref
from .morphisms import (MorphismWitness, check_ml_conditions, datum_equivalent, is_homomorphism,
                        iso_search, psi_matrix, transport_datum)
from .products import (CrossedSystem, ExtendingDatum, MatchedPair, bicrossed_product,
                       canonical_datum, crossed_product, hemisemidirect, theorem1_oracle,
                       twisted_product, unified_product, validate_crossed_system,
                       validate_extending_structure, validate_matched_pair)
from .report import AxiomReport, Witness

__version__ = "0.1.0"
