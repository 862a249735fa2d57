"""Chromatic bounds for quadratic graphs over R and Q_p.

Lower bounds come from Fourier transforms of chopped hyperbola measures
(Hoffman-type ratio bounds); upper bounds from explicit colorings of
anisotropic forms.
"""
from qgraph.backend import NAME as BACKEND
from qgraph.coloring import (
    build_box_coloring,
    build_digit_coloring,
    clique_upper,
    simplex_clique,
    sphere_annulus,
    verify_proper,
)
from qgraph.config import RunConfig
from qgraph.localfield import PadicNumber, padic_from_rational, tate_character
from qgraph.oscint import J1_bruteforce, J1_exact, F_kernel, padic_mu_hat, real_mu_hat
from qgraph.qform import (
    Place,
    QuadraticSpace,
    find_isotropic_vector,
    global_anisotropy_witness,
    hilbert_symbol,
    isotropy_classify,
    parse_form,
)
from qgraph.regular import check_identity, compute_Cn, det_sum, embed
from qgraph.spectral import padic_chopped_bound, real_chopped_bound

__version__ = "0.1.0"
