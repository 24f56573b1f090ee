"""Polarized pulses through PMD/PDL optical networks as weak measurements."""
from .analytic import (
    WeakValue,
    abl_probability,
    mean_toa_pmd_pdl,
    multi_trunk_weak_toa,
    multi_trunk_weak_values,
    rotated_state,
    sigma_z_exact_pure,
    weak_value_mixed,
    weak_value_pure,
)
from .errors import (
    AnnihilationError,
    DivergentWeakValueError,
    PmdWeakError,
    TopologyError,
    ValidationError,
)
from .jones import (
    Axis,
    expectation,
    filtered_state,
    pauli,
    pdl_operator,
    plus_state,
    pmd_operator,
    polar_decompose,
)
from .netspec import Experiment, Network, Pdl, Pmd, parse_experiment, to_canonical
from .propagate import (
    PropagationResult,
    network_operator_at,
    pointer_sigma_z,
    propagate,
    strong_limit_probabilities,
)
from .pulse import GaussianPulse, Grid

__version__ = "0.1.0"
