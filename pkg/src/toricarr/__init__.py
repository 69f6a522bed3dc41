"""Exact combinatorics of toric arrangements of crystallographic root systems.

Counts and classifies the layers of the arrangement defined by a root
system on its coroot torus, and computes the Euler characteristic and
Poincare polynomial of the complement, with brute-force oracles for
everything at small rank.  All arithmetic is exact.
"""

__version__ = "0.1.0"

from .errors import CapabilityError
from .rootsys import (
    AffineDiagram,
    RootSystem,
    TypeSymbol,
    affine_diagram,
    build,
    build_str,
    delete_vertex,
    diagram_automorphisms,
    format_type,
    parse_type,
    type_invariants,
)
from .intlat import SmithDecomposition, quotient_torsion, saturate, smith_normal_form
from .weyl import WeylGroup, center_subgroup, longest_element, orbit_and_stabilizer
from .subsys import (
    CompleteFamily,
    Subsystem,
    completion,
    decompose_type,
    enumerate_complete,
    make_subsystem,
    w_orbit_census,
)
from .layers import (
    IntPolynomial,
    LayerClassRecord,
    PointOrbitRecord,
    RegularCharacterMultiple,
    a_series_census,
    a_series_poincare,
    count_layers,
    count_points,
    equivariant_euler,
    euler_characteristic,
    layer_census,
    n_theta,
    poincare,
    point_orbits,
    verify_degree_identity,
)
from .oracle import (
    BrutePoint,
    ExplicitLayer,
    LayerPoset,
    brute_points,
    build_poset,
    component_count,
)
