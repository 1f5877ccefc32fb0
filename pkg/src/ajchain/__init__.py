"""Bilateral birth-death chains on the integers built from associated Jacobi
polynomials, with their explicit 2x2 spectral matrix and stochastic factorizations."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .chain import (
    BilateralSequence,
    ChainParams,
    Region,
    admissible_t_intervals,
    classify_region,
    coeff_ab,
    coeff_pqr,
    falsification_sweep,
    potential,
    tridiagonal_dense,
)
from .errors import ConvergenceError, NumericalError, ParameterError, PoleError, QuadratureError
from .factorization import (
    FactorPair,
    cf_H,
    cf_Hprime,
    chain_sequence_sums,
    darboux_lu,
    darboux_ul,
    lu_factorize,
    ul_factorize,
)
from .polynomials import BilateralPoly, block_jets, diffop_residual, eval_block, eval_q
from .quadrature import (
    block_moment_matrix,
    jacobi_rule,
    km_matrix,
    km_transition,
    matrix_rule,
    recurrence_diagnostic,
)
from .simulate import UrnModel, empirical_transition, transition_row, truncated_power
from .specfun import hyp2f1, ln_gamma, pochhammer
from .spectral import (
    delta_mass_gap,
    density_psi,
    density_W,
    geronimus_lu,
    geronimus_ul,
    spectral_geronimus,
    spectral_psi,
    spectral_W,
)

__all__ = [name for name in dir() if not name.startswith("_")]
