"""Exact topological tau expansions of Drinfeld-Sokolov hierarchies.

The pipeline: build an affine algebra realization (types A/B/C/D/G2),
solve the reduced string equation by a graded recursion, assemble the
symbol J = g(-t) gamma, and read log tau off the truncated block-Hankel
trace expansion.  All arithmetic is exact (rationals and small number
fields); the published expansions are bundled as verification tables.
"""

from .algebra import (
    AlgebraData,
    AlgebraSpec,
    ExponentLabel,
    build_algebra,
    heisenberg_generator,
    homogeneous_subspace,
    parse_spec,
    principal_degree,
    weight_basis,
)
from .correlators import (
    Diagonalization,
    ZetaSeries,
    barF1,
    barFm,
    build_diagonalization,
    crosscheck_correlators,
)
from .numberfield import (
    FieldElement,
    NumberField,
    adjoin_root,
    cyclotomic_field,
    fe_arith,
    fe_project_rational,
    field_make,
    quadratic_field,
    rational_field,
)
from .series import (
    GradedSeries,
    LoopMatrix,
    gs_arith,
    gs_extract,
    lm_exp,
    lm_fourier,
    lm_mul,
    q_var,
    t_var,
)
from .stringeq import (
    GammaSolution,
    ad_lambda1_solve,
    levels_for_cap,
    load_gamma,
    save_gamma,
    solve_reduced_string_equation,
    string_residual,
)
from .tables import load_bundled, load_table, verify_expansion
from .tau import (
    Symbol,
    TauExpansion,
    build_g,
    build_symbol,
    hankel_product,
    log_tau,
    reduction_check,
    toeplitz_identity_check,
    toeplitz_minor_det,
)

__version__ = "0.1.0"
