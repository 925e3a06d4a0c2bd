"""Vectors with a prescribed Dirichlet constant for one linear form.

Builds the integer sequences that define the vectors, the sparse integer
forms that bound the approximation function from above, the certificates
that bound it from below at critical heights, and an exhaustive search
used as an independent check at small heights.
"""

from .numerics import Enclosure, make_rational, nearest_integer
from .construction import (
    Params,
    PhiFamily,
    Schedule,
    Sequence,
    build_sequence,
    build_sequence_phi,
    partial_sums,
    tail_enclosure,
)
from .witnesses import build_witness, classify_Q, compute_N, evaluate_form
from .certificates import (
    check_schedule,
    integrality_checks,
    lower_bound_certificate,
    verify_reducedness,
)
from .oracle import psi_star_enclosure, psi_star_exhaustive
from .spectrum import (
    check_phi_admissible,
    liouville_check,
    phi_ratio_scan,
    theta_estimate,
    theta_scan,
)

__version__ = "0.1.0"
