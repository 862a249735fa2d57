"""Fourier transforms of chopped hyperbola measures over R and Q_p."""
from qgraph.oscint.padic import (
    F_kernel,
    F_kernel_exact,
    J1_bruteforce,
    J1_exact,
    OddPrimeError,
    PadicChoppedMeasure,
    ball_character_integral,
    padic_mu_hat,
    padic_mu_hat_exact,
    shell_character_integral,
)
from qgraph.oscint.real import (
    QuadratureError,
    RealChoppedMeasure,
    VdcPreconditionError,
    oscillatory_integral,
    real_mu_hat,
    real_mu_hat_estimate,
    real_mu_hat_many,
    vdc_envelope_check,
)
