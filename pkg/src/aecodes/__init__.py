"""Exact construction and verification of codes on a single angular-momentum manifold."""
from .angular import clebsch_gordan, fit_polynomial, y_matrix_element
from .channels import (ErrorSet, KrausOperator, OpKind, adjoint_compose, dephasing_set,
                       first_order_channel, order_n_channel, resolved_transition)
from .codes import (Code, Codeword, binomial_ae_code, counter_symmetric_code, detection_code,
                    symmetric_code, validate)
from .errors import DomainError, InfeasibleError, ParameterError, SearchSpaceError
from .halfint import HalfInt
from .kl import (detection_check, equivalence_oracle, kl_check, moments, reduction_check,
                 support_exclusion_check)
from .radical import Radical
from .search import SearchProblem, scan, solve

__version__ = "0.1.0"
