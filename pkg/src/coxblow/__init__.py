"""Cox rings of blow-ups of projective space along linear subspaces.

The Cox ring is computed as the ring of invariants of an additive group
acting on the polynomial Cox ring of a toric model.
"""

from .field import GF, QQ, FieldMismatchError
from .linalg import BACKEND, ExactMatrix, kernel_basis, row_space_dim
from .model import (BlowupModel, ClassSyntaxError, ConfigError, ConfigSpec, PicClass, build_linear,
                    build_m0n, build_model, degree_of_monomial, degree_of_variable, format_class,
                    parse_class)
from .polynomial import Polynomial, monomial, parse_polynomial
from .derivation import (FixedComponent, apply_derivation, fixed_components, group_substitute,
                         in_derivation_kernel, is_invariant)
from .graded import (GeneratorRecord, GradedPiece, InvariantBasis, LaurentCertificate,
                     NotInvariantError, RelationRecord, ResourceLimitExceeded, boundary_invariants,
                     discover_generators, discover_relations, enumerate_piece, invariant_basis,
                     is_effective, laurent_rewrite)

__version__ = "0.1.0"
