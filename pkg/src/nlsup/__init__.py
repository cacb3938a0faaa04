"""Set-valued tools for nonlocal supremal functionals and their relaxation."""

from .errors import (
    CapacityError,
    DimensionError,
    EmptySetError,
    HullNotConverged,
    InclusionError,
    ParseError,
    PreconditionError,
    UntrustedScheduleError,
)
from .setcore import (
    BoxUnion,
    FinitePairSet,
    Geometry,
    LatticeGrid,
    diagonalize,
    hat,
    hausdorff,
    membership,
    projections,
    rasterize,
    section,
    symmetrize,
    transpose,
)
from .hulls import (
    ConvexSet,
    HullResult,
    dex_prune,
    nested_intersection_check,
    sc_hull,
    sc_hull_boxes,
    sc_hull_grid,
    structure_check,
    two_cartesian_hull,
)
from .cartesian import CartesianFamily, hat_via_cliques, inclusion_feasible, maximal_cartesian
from .supremand import (
    LevelSchedule,
    SampledSupremand,
    closed_form,
    closed_form_library,
    coercivity_report,
    hat_supremand,
    sample_closed_form,
    slc_envelope,
    sublevel,
)
from .functional import SimpleFunction, eval_J, eval_Jrlx, in_A_E, indicator_I, lsc_check
from .oscillation import (
    OscillationSpec,
    build_sequence,
    empirical_young_measure,
    simple_approximation,
    weak_star_report,
)

__version__ = "0.1.0"
