"""Scalar parameter estimation under quantum local differential privacy.

Bloch/affine channel calculus, quantum Fisher information, hockey-stick
divergence, exact qubit LDP certification, sample-complexity bound
calculators, a Cramer-Rao-saturating Monte Carlo estimator, and a
constrained channel search.
"""

from .bloch import from_density, generators, max_radius, to_density
from .bounds import (
    BoundsReport,
    biased_factor,
    bounds_cor1,
    bounds_thm1,
    bounds_thm2,
    constants_thm1,
    fisher_cap_thm1,
    fisher_cap_thm2,
    qudit_upper_bound,
)
from .channels import (
    AffineChannel,
    apply,
    cp_check,
    depolarizing,
    identity_channel,
    image_radius,
)
from .divergence import hockey_stick, hockey_stick_qubit, trace_norm
from .estimation import (
    SldMeasurement,
    TrialStats,
    simulate,
    sld_measurement,
    validate_upper_bound,
)
from .ldp import (
    LdpCertificate,
    audit_by_sampling,
    certify,
    ldp_sup,
    tight_epsilon,
)
from .optimizer import ChannelSearchResult, maximize_qfi, sweep
from .qfi import (
    QfiResult,
    StateFamily,
    family_by_name,
    family_derivative,
    qfi_family,
    qfi_qubit,
    qfi_qudit,
    qfi_sld_oracle,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
