"""Two-center STO integrals from the binomial Legendre product expansion."""

__version__ = "0.1.0"

from .combinatorics import binomial, e_floor, gen_binomial
from .errors import ConvergenceError, DomainError
from .integrals import (
    IntegralResult,
    IntegralSpec,
    StoParams,
    assemble_kernel,
    compute,
    nuclear_attraction,
    overlap,
    sto_norm,
)
from .legendre import SqrtRationalCoeff, legendre_coeff, legendre_eval, legendre_oracle
from .product_expansion import (
    EllipsoidalPoint,
    build_expansion,
    eval_direct,
    eval_expansion,
    verify_identity_7,
)
