"""cpcboard: seeded AutoML pipeline search visualized as conditional
parallel coordinates with a live leaderboard."""

from .engine import (
    Metrics,
    PipelineCandidate,
    RunSnapshot,
    SearchConfig,
    perturb,
    run_search,
    satisfies,
)
from .layout import (
    AxisDescriptor,
    CpcLayout,
    ExpansionState,
    Polyline,
    color_for,
    compute_layout,
    normalize,
    toggle,
    top_level_axes,
    visible_axes,
)
from .space import (
    ComponentSpec,
    Configuration,
    ConstraintSpec,
    HyperparameterSpec,
    SearchSpace,
    StepSlot,
    count_structures,
    default_configuration,
    load_default_space,
    parse_space,
    serialize_space,
    validate_space,
)
from .surface import ResponseSurface, evaluate, make_surface

__version__ = "0.1.0"
