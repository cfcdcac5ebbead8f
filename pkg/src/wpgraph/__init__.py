"""Exact p-Wasserstein spaces over graph metric spaces.

Graphs, finitely supported rational measures, an exact optimal transport
solver with a brute-force oracle, the alpha-neighbouring relation and B_s
witnesses, the teleport and genericity constructions, graph automorphisms,
and Frucht graphs realizing a prescribed finite group.
"""

from ._version import __version__
from .automorphisms import (
    enumerate_automorphisms,
    enumerate_isometries,
    is_automorphism,
    isometries_equal_automorphisms,
)
from .errors import WPGraphError
from .graph import (
    Graph,
    build_graph,
    complete_graph,
    cycle_graph,
    grid_graph,
    path_graph,
    shortest_path_matrix,
    verify_graph_metric,
)
from .groups import (
    FiniteGroup,
    cyclic_group,
    direct_product,
    frucht_graph,
    groups_isomorphic,
    prescribed_isometry_space,
    symmetric_group,
    trivial_group,
    validate_group,
)
from .measure import Measure, SignedMass, dirac, interpolate, make_measure, pushforward
from .neighbouring import bs_membership, bs_witness, check_neighbouring, classify_pair
from .rigidity import (
    genericize,
    run_rigidity_suite,
    teleport_curve,
    teleport_extremes,
    verify_pushforward_isometry,
)
from .serialize import parse_rational
from .transport import Coupling, oracle_ot, solve_ot, wasserstein_distance

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
