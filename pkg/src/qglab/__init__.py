"""qglab: a spectral laboratory for compact metric graphs.

Computes Laplacian eigenvalues under natural (continuity + Kirchhoff) and
Dirichlet vertex conditions, builds the extremal graph families behind the
diameter/total-length eigenvalue bounds, solves the associated transcendental
limit equations, applies graph surgery, and verifies the resulting
inequalities numerically.
"""

from qglab.bounds import (
    OmegaResult,
    closed_form_bounds,
    gamma,
    omega_conjectured,
    omega_higher,
    omega_point_mass,
    omega_spectral_gap,
    omega_star_limit,
)
from qglab.families import (
    DumbbellParams,
    StarParams,
    make_basic,
    make_equilateral_star,
    make_loop,
    make_path,
    make_pendant_cycle,
    make_star,
    make_star_dumbbell,
    make_star_tree,
    make_symmetric_dumbbell,
    make_tadpole,
    shorter_edges_ok,
    star_mu1,
    star_secular,
)
from qglab.fem import Mesh, assemble, build_mesh, fem_eigenvalues
from qglab.graph import (
    Edge,
    GraphError,
    GraphParseError,
    GraphPoint,
    MetricGraph,
    Vertex,
    VertexCondition,
    betti,
    canonical_signature,
    diameter,
    dirichlet_eccentricity,
    distance,
    dump_graph,
    max_loop_length,
    parse_graph,
    same_shape,
    suppress_degree_two,
    total_length,
)
from qglab.spectral import (
    EdgeWave,
    Eigenpair,
    PiecewiseLinear,
    SolverOptions,
    Spectrum,
    eigenfunction,
    eigenvalues,
    hadamard_derivative,
    nodal_domains,
    nth_eigenvalue,
    pruefer_amplitude,
    rayleigh_quotient,
    secular_matrix,
    secular_value,
)
from qglab.surgery import (
    cut,
    cut_components,
    cut_loops_at_midpoints,
    glue,
    glue_graphs,
    lengthen,
    split_point,
    transplant,
    with_vertex_condition,
)
from qglab.verify import (
    BoundReport,
    RandomGraphSpec,
    check_higher_bound,
    check_key_comparison,
    check_spectral_gap_bound,
    check_symmetrisation,
    discrepancy_report,
    explore_conjecture,
    random_graph,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "DumbbellParams",
    "Edge",
    "EdgeWave",
    "Eigenpair",
    "GraphError",
    "GraphParseError",
    "GraphPoint",
    "Mesh",
    "MetricGraph",
    "OmegaResult",
    "PiecewiseLinear",
    "RandomGraphSpec",
    "SolverOptions",
    "Spectrum",
    "StarParams",
    "Vertex",
    "VertexCondition",
    "assemble",
    "betti",
    "build_mesh",
    "canonical_signature",
    "check_higher_bound",
    "check_key_comparison",
    "check_spectral_gap_bound",
    "check_symmetrisation",
    "closed_form_bounds",
    "cut",
    "cut_components",
    "cut_loops_at_midpoints",
    "diameter",
    "dirichlet_eccentricity",
    "discrepancy_report",
    "distance",
    "dump_graph",
    "eigenfunction",
    "eigenvalues",
    "explore_conjecture",
    "fem_eigenvalues",
    "gamma",
    "glue",
    "glue_graphs",
    "hadamard_derivative",
    "lengthen",
    "make_basic",
    "make_equilateral_star",
    "make_loop",
    "make_path",
    "make_pendant_cycle",
    "make_star",
    "make_star_dumbbell",
    "make_star_tree",
    "make_symmetric_dumbbell",
    "make_tadpole",
    "max_loop_length",
    "nodal_domains",
    "nth_eigenvalue",
    "omega_conjectured",
    "omega_higher",
    "omega_point_mass",
    "omega_spectral_gap",
    "omega_star_limit",
    "parse_graph",
    "pruefer_amplitude",
    "random_graph",
    "rayleigh_quotient",
    "same_shape",
    "secular_matrix",
    "secular_value",
    "shorter_edges_ok",
    "split_point",
    "star_mu1",
    "star_secular",
    "suppress_degree_two",
    "total_length",
    "transplant",
    "with_vertex_condition",
]
