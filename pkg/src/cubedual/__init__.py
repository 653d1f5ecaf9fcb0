"""Dual cube complexes of wallspaces, coarse geometry diagnostics and a
finite-scale peripheral refinement pipeline for groups acting on them."""
from .coarse_geometry import (Graph, bottleneck_delta, circuit_profile, circuits_through, hyperbolicity_bound,
                              hyperbolicity_delta)
from .dual_complex import (CubeComplex, Orientation, build_dual, median, principal_orientation, verify_duality,
                           verify_median_graph)
from .errors import CubeDualError, HorizonError, InputError, ResourceError, VerificationError
from .free_product_lab import FreeProductModel, abc, cayley_ball, dihedral, example_walls, normal_form, syllable_wall
from .group_action import (GroupWallspace, PermutationModel, axis_separation_search, ball_wallspace, deepness,
                           essential_wall_search, fixed_point_search, pointwise_fixed_geodesic, skewer_search)
from .kernels import BACKEND
from .pocset import Halfspace, Wall, Wallspace, crosses, nests
from .refinement import (Peripheral, RefinedStructure, build_peripheral_dual, refine_structure,
                         relatively_geometric_audit, vertex_stabilizers)

__version__ = "0.1.0"
