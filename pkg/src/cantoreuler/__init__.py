"""Exact verification engine for a doubly-exponential corner Cantor measure,
log-weighted circulation norms, sparse cube towers, and the compactly
supported eddy fields built on the same geometry."""

from .concentration import (
    CubeEnergy,
    DefectReport,
    DimensionCertificate,
    VortexSparseBound,
    WeakPairingBound,
    dimension_zero_certificate,
    energy_fraction,
    energy_in_cube,
    reduced_defect,
    vortex_sparse_lower_bound,
    weak_pairing_bound,
)
from .dyadic import (
    DEFAULT_MAX_GENERATION,
    ArbitraryCube,
    CantorCube,
    DyadicCube,
    DyadicScalar,
    GenerationLimitError,
    cantor_generation,
    generation_bracket,
    generation_level,
    max_intersections,
    side_length,
)
from .extscalar import ExtScalar
from .measure import (
    AtomicMeasure,
    MorreyConfig,
    MorreyReport,
    OmegaMeasure,
    generation_atoms,
    morrey_log_norm,
    omega_arbitrary_cube,
    omega_cube,
    omega_k_cube,
    stabilization_generation,
)
from .sparse import (
    SparseFamily,
    TowerSpec,
    Witness,
    build_tower,
    chained_towers,
    divergence_profile,
    generation_towers,
    sparse_partial_sum,
    sparse_partial_sum_sq,
    tower_spec,
    verify_sparse,
)
from .vortex import (
    CapabilityError,
    EnergyClosedForm,
    ENERGY_LIMIT,
    PatchDensityMeasure,
    PatchParams,
    RadialSpeed,
    density_morrey_norm,
    dm_scaling_morrey,
    dm_scaling_report,
    l2_norm_squared,
    l2_quadrature,
    patch_l1_and_circulation,
    patch_params,
    speed_profile,
    velocity_at,
    velocity_scaled_at,
    vorticity_at,
    vorticity_scaled_at,
)

__version__ = "0.1.0"
