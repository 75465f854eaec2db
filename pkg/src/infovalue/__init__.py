"""Value-of-information curves for finite Bayesian decision problems.

Three curves are computed over an information budget eta:

* ``efficient_curve``: best decision value among distributions of posteriors
  whose amount of information is at most eta;
* ``inefficient_curve``: worst decision value among those carrying at least eta;
* ``maxmin_curve``: best max-min value over channels for an ambiguity-averse
  decision maker facing a polytope of priors.
"""

from .efficient import (
    CurvePoint,
    check_binding,
    check_concavity,
    efficient_curve,
    efficient_value,
    marginal_value_at_zero,
    min_full_info_cost,
)
from .errors import (
    AffineValueError,
    BoundaryPriorError,
    BudgetCapError,
    InfeasibleBudgetError,
    InfoValueError,
    ProblemError,
)
from .geometry import decision_regions, flat_threshold, locate_region, undominated_actions, value_function
from .grid import PosteriorGrid, default_grid, make_grid
from .inefficient import check_flat_at_zero, inefficient_curve, inefficient_value
from .lp import DEFAULT_BACKEND as LP_BACKEND
from .maxmin import (
    Channel,
    PriorSet,
    SearchConfig,
    Strategy,
    bayes_map,
    channel_cost,
    maxmin_curve,
    maxmin_value,
    maxmin_voi,
    mix_channels,
)
from .model import (
    DecisionProblem,
    EtaBudget,
    InformationMeasure,
    PosteriorDistribution,
    eval_amount,
    eval_divergence,
    eval_phi_inverse,
    make_problem,
)

__version__ = "0.1.0"
