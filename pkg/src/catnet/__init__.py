"""Entangled coherent-state networks: generation, teleportation and diagnostics."""

__version__ = "0.1.0"

from .errors import (
    CatSimError,
    InvalidMError,
    MemoryBudgetExceeded,
    ModeError,
    NonUnitaryError,
    TailMassExceeded,
    ZeroNormError,
)
from .cat_algebra import (
    CatState,
    ChannelSpec,
    channel_state,
    fidelity,
    inner_product,
    make_channel_state,
    make_input_cat,
    normalize,
)
from .linear_optics import LabelUnitary, balanced_bs, modified_bs_B, phase_shift
from .measurement import number_distribution, project_number, project_total_parity
from .generation import (
    LadderPlan,
    TreePlan,
    generation_probability_analytic,
    ladder_generate,
    reduce_by_parity,
    tree_generate_pow2,
)
from .teleportation import (
    NetworkConfig,
    channel_modes_for,
    monte_carlo_success,
    success_probability_analytic,
    teleport_once,
)
from .analytics import (
    concurrence_analytic,
    concurrence_from_decomposition,
    eigen_relation_check,
    mean_photon_per_mode,
    reference_limit_state,
)
from .fock_oracle import FockVector, crosscheck_pipeline, to_fock
