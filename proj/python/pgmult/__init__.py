"""Stick-breaking multinomial models with Polya-gamma augmentation."""

from pgmult._core import (  # noqa: F401
    BoundaryError,
    LinAlgError,
    ParameterError,
    __version__,
    ctm_generate,
    evidence,
    gen_config,
    gp_conditional,
    kappa,
    lds_ffbs,
    log_density_pi_given_gaussian,
    log_density_psi_given_dirichlet,
    log_multinomial_sb,
    moment_match_dirichlet,
    pg_mean,
    pi_sb,
    pi_sb_inv,
    residual_counts,
    run_config,
    sample_aux,
    sample_pg,
    selfcheck,
)
