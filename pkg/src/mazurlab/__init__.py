"""Mazur maps between Schatten classes: inequality checks, oracles and ratio search."""
from .errors import (DegeneratePair, DomainError, ExponentMismatch, IllConditioned,
                     MazurlabError, NoConvergence, NotHermitian, NotNormalized, NotPositive,
                     NumericalError, ShapeMismatch)
from .funccalc import (QuadratureScheme, c_theta, frechet_f_t, gamma_square, power_diff_integral,
                       power_pos, power_via_integral, resolvent_family, signed_power)
from .kernels import BACKEND
from .lemmas import SuiteConfig, replay, run_suite
from .matcore import AlgebraShape, Element, Rng, hermitian_eig, operator_norm, polar, svd
from .mazur import MazurParams, mazur_map
from .records import CheckRecord
from .schatten import schatten_norm, trace
from .search import Budget, holder_ratio, maximize, sweep

__version__ = "0.1.0"
