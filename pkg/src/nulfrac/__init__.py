"""Discrete fractional calculus on non-uniform (quadratic and q-quadratic) lattices.

Layers, from the bottom up:

* :mod:`nulfrac.lattice` -- lattices, q-Gamma functions and generalized powers;
* :mod:`nulfrac.grid` -- sampled functions on unit-step grids;
* :mod:`nulfrac.operators` -- backward fractional sums and differences,
  Abel solvers and Taylor formulas;
* :mod:`nulfrac.central` -- central calculus, fractional exponentials and
  sequential fractional difference equations;
* :mod:`nulfrac.verify` -- the randomized identity suite;
* :mod:`nulfrac.cli` -- the ``nulfrac`` command.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .grid import GridFunction, overlap, sample
from .lattice import (
    Family,
    FracOrder,
    LatticeSpec,
    bracket,
    gen_power,
    modified_gamma,
    q_gamma,
    step_x,
    x_shifted,
)
from .operators import (
    AbelVariant,
    OperatorConfig,
    TaylorKind,
    abel_solve,
    caputo_diff,
    frac_sum,
    frac_taylor_defect,
    nabla_diff_k,
    nikiforov_diff,
    rl_diff_compose,
    rl_diff_direct,
    rl_diff_residue,
    taylor_expand_integer,
    uniform_binomial_sum,
)
from .central import (
    CentralConfig,
    CentralTaylorKind,
    SeriesSpec,
    central_caputo,
    central_diff_k,
    central_frac_sum,
    central_rl_diff,
    central_taylor_defect,
    frac_exp,
    frac_trig,
    sequential_diff,
    solve_seq_fde,
)
from .verify import CheckReport, IdentityCheck, run_check, run_suite
