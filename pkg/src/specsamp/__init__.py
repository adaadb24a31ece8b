"""Generalized sampling and recovery of graph signals in the graph
frequency domain."""

__version__ = "0.1.0"

from .bipartite import (
    BipartiteSystem,
    OneBranchResult,
    build_system,
    build_wprime,
    correction_response,
    encode_payload,
    one_branch_roundtrip,
    parse_payload,
    reduction_identity_residual,
    verify_corollary1,
    vertex_pipeline,
    vertex_pipeline_chebyshev,
)
from .chebyshev import ChebyshevFilter, apply_chebyshev, chebyshev_fit
from .errors import (
    ConnectivityFailure,
    DimensionMismatch,
    DsConditionViolated,
    EigensolveFailure,
    IndexOutOfRange,
    IntervalMismatch,
    InvalidParameter,
    IoFailure,
    IsolatedVertex,
    NotBipartite,
    PairingFailure,
    SingularCorrelation,
    SingularInteriorBlock,
    SpecSampError,
    UnequalParts,
    ZeroReference,
)
from .experiments import (
    BipartiteExperimentConfig,
    ExperimentConfig,
    emit_report,
    parse_report_csv,
    run_bipartite_experiment,
    run_recovery_experiment,
    run_recovery_table,
)
from .filters import (
    SpectralFilter,
    bandlimit,
    bandlimit_response,
    cosine_taper,
    exponential_decay,
    from_response,
    from_values,
    identity_filter,
    inverted_ramp,
    linear_decay,
    load_filter,
    save_filter,
    smoothness_ramp,
)
from .graphs import (
    Graph,
    OperatorKind,
    VariationOperator,
    combinatorial_laplacian,
    complete_bipartite,
    gen_circular,
    gen_matched_bipartite,
    gen_random_bipartite,
    gen_random_sensor,
    kron_reduce,
    load_graph,
    normalized_laplacian,
    save_graph,
)
from .recovery import (
    DsCheck,
    Mode,
    PgsModel,
    RecoveryDesign,
    SmoothnessPrior,
    Strategy,
    SubspacePrior,
    check_ds,
    design_smoothness_predefined,
    design_smoothness_unconstrained,
    design_subspace_predefined,
    design_subspace_unconstrained,
    generate_pgs,
    mse_db,
    reconstruct,
    smoothness_energy,
)
from .sampling import (
    SampledSpectrum,
    SamplingConfig,
    frequency_sample,
    sampled_cross_correlation,
    spectral_fold,
    spectral_upsample,
    vertex_sample,
)
from .spectral import SpectralBasis, apply_filter, dft_basis, eigendecompose, gft, igft
