"""Poissonian loop ensembles on finite weighted graphs.

Exact transition kernels, two loop-ensemble samplers, Gaussian field
couplings, balanced-network laws, and the homology class distribution,
with a verification battery tying the Monte Carlo side to the closed
forms.
"""

from .errors import (
    BadChi,
    BadForm,
    BadGraph,
    BadPartition,
    BadSupport,
    BudgetExceeded,
    Disconnected,
    DisconnectedSupport,
    DuplicateIndex,
    EmptyBasis,
    EmptyNetwork,
    GridTooCoarse,
    LoopSoupError,
    MismatchBeyondTolerance,
    NonIntegral,
    NonTransient,
    NotEulerian,
    SingularTwist,
    TailTooHeavy,
    TooLarge,
    ZeroNetwork,
)
from .eulerian import (
    ModifierMatrix,
    NetworkLawEntry,
    best_tour_count,
    enumerate_eulerian,
    exact_network_prob_alpha,
    exact_network_prob_alpha1,
    generating_function,
    max_flow,
    mu_network_measure,
    verify_poisson_convolution,
)
from .exact import (
    alpha_permanent,
    arborescence_count,
    det_complex,
    permanent,
    spanning_tree_weight_sum,
)
from .fields import (
    CONVENTIONS,
    FieldSample,
    complex_wick_moment,
    ks_two_sample,
    occupation_samples,
    ray_knight_check,
    sample_complex_field,
    sample_complex_fields,
    sample_excursion_field,
    sample_real_field,
    sample_real_fields,
    verify_det_identity,
    verify_isomorphism,
    verify_moment_formula,
)
from .graphs import ChainKernel, EnergyForm, WeightedGraph, build_kernel, energy, twisted_energy
from .homology import (
    CycleBasis,
    HarmonicForm,
    HomologyClass,
    HomologyLaw,
    JacobianVolume,
    cycle_basis,
    harmonic_basis,
    homology_distribution,
    homology_distribution_auto,
    intersection_matrix,
    jacobian_volume,
    network_homology_class,
    pairing_phase,
)
from .network import Network
from .reports import StatLine, TestReport
from .rng import as_generator, replica_map, replica_rng
from .soup import (
    BasedLoop,
    LoopSoup,
    direct_sample,
    jump_matrix,
    merge_soups,
    mu_mass_nontrivial,
    occupation,
    wilson_sample,
)
from .verify import run_all

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
