"""Finite-horizon machinery for block summability and Orlicz-family norms.

The library evaluates, on finite sequence prefixes: window (almost-
convergence) means, lacunary block schedules and their densities,
Musielak-Orlicz modulars with Luxemburg/Amemiya norms and Young
conjugates, matrix transforms with certified truncation, the combined
block statistics with uniform-in-window sups, and the counterexample
constructions plus inclusion experiments built on top of them.
"""

__version__ = "0.1.0"

from .convergence import (
    BlockTrajectory,
    SpaceParams,
    Verdict,
    classify_trajectory,
    density_order_alpha,
    lacunary_density,
    ntheta_norm,
    ntheta_statistic,
    shat_flags,
    strong_block_statistic,
    uniform_trajectories,
    uniform_verdict,
)
from .errors import LacunaryError
from .experiments import (
    CounterexampleSpec,
    InclusionReport,
    UniquenessReport,
    build_thm37,
    build_thm38,
    liminf_growth_estimate,
    random_bounded_sequence,
    run_inclusion_matrix,
    thm31_block_bounds,
    thm33_block_bounds,
    thm34_triangle_bounds,
    uniqueness_experiment,
)
from .orlicz import (
    ConstantFamily,
    CustomFamily,
    Delta2Report,
    ExpMinusOne,
    ExponentSequence,
    IndexPowerFamily,
    IndexScaledFamily,
    LinearSlope,
    MusielakOrliczFamily,
    OrliczFunction,
    Power,
    PowerOverP,
    RhoSequence,
    ScaledPower,
    SpikeFamily,
    Table,
    complementary,
    delta2_check,
    eval_orlicz,
    luxemburg_norm,
    modular,
    orlicz_norm,
    verify_orlicz_axioms,
)
from .sequences import (
    CesaroC1,
    Explicit,
    Geometric,
    Identity,
    LacunarySchedule,
    MatrixOperator,
    RowGenerator,
    RowTable,
    Sequence,
    Shift,
    apply_matrix,
    build_lacunary,
    constant_sequence,
    geometric_tail,
    transform_sequence,
    window_mean,
)

__all__ = [
    "__version__",
    "BlockTrajectory",
    "CesaroC1",
    "ConstantFamily",
    "CounterexampleSpec",
    "CustomFamily",
    "Delta2Report",
    "ExpMinusOne",
    "Explicit",
    "ExponentSequence",
    "Geometric",
    "Identity",
    "InclusionReport",
    "IndexPowerFamily",
    "IndexScaledFamily",
    "LacunaryError",
    "LacunarySchedule",
    "LinearSlope",
    "MatrixOperator",
    "MusielakOrliczFamily",
    "OrliczFunction",
    "Power",
    "PowerOverP",
    "RhoSequence",
    "RowGenerator",
    "RowTable",
    "ScaledPower",
    "Sequence",
    "Shift",
    "SpaceParams",
    "SpikeFamily",
    "Table",
    "UniquenessReport",
    "Verdict",
    "apply_matrix",
    "build_lacunary",
    "build_thm37",
    "build_thm38",
    "classify_trajectory",
    "complementary",
    "constant_sequence",
    "delta2_check",
    "density_order_alpha",
    "eval_orlicz",
    "geometric_tail",
    "lacunary_density",
    "liminf_growth_estimate",
    "luxemburg_norm",
    "modular",
    "ntheta_norm",
    "ntheta_statistic",
    "orlicz_norm",
    "random_bounded_sequence",
    "run_inclusion_matrix",
    "shat_flags",
    "strong_block_statistic",
    "thm31_block_bounds",
    "thm33_block_bounds",
    "thm34_triangle_bounds",
    "transform_sequence",
    "uniform_trajectories",
    "uniform_verdict",
    "uniqueness_experiment",
    "verify_orlicz_axioms",
    "window_mean",
]
