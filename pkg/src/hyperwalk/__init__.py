"""Random walks on hyper-graphs: vertex/edge transition operators, exact radio
hitting times through the coupled edge chain, seeded Monte-Carlo cover and
radio-cover estimation, and bound checking on generated families."""

__version__ = "0.1.0"

from .core import (
    BipartiteLift,
    DirectedHypergraph,
    DisconnectedError,
    Graph,
    Hypergraph,
    RadioHypergraph,
    ValidationError,
    arc_radio_from_graph,
    bipartite_lift,
    degrees,
    dump_hypergraph,
    hypergraph_from_graph,
    incidence_matrix,
    is_connected,
    load_hypergraph,
    parse_hypergraph,
    radio_from_graph,
)
from .operators import (
    DirectedWalkOperators,
    WalkOperators,
    build_directed_operators,
    build_operators,
    coupling_check,
    lift_walk_check,
    spectrum_check,
    stationary,
)
from .exact import (
    HittingResult,
    RadioHittingResult,
    commute_check,
    effective_resistance,
    foster_sum,
    hitting_matrix,
    hitting_times,
    max_hitting,
    max_radio_hitting,
    radio_hitting,
    radio_hitting_directed,
    radio_hitting_matrix,
    resistance_matrix,
    simple_walk_matrix,
    transitive_identities,
)
from .simulate import (
    SimReport,
    SpeedupReport,
    Trajectory,
    estimate_cover,
    estimate_radio_cover,
    estimate_speedups,
    sample_first_times,
    simulate_walk,
)
from .families import (
    clique_line,
    default_grid,
    hyperline,
    mesh2d,
    radio_line,
    random_uniform,
    single_edge,
    unit_disk,
)
from .bounds import (
    BoundReport,
    harmonic,
    instance_bound_reports,
    line1d_bound,
    line1d_check,
    line1d_step_moments,
    lower_trend,
    matthews_bound,
    mesh2d_trend,
    mnr_bound,
    radio_matthews_bound,
    speedup_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
