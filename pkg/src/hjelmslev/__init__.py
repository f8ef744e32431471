"""Uniform projective Hjelmslev planes over small finite chain rings:
exact plane construction, 2-arc verification and analysis, collineation
groups with stabilizer chains, and symmetry-reduced maximal-arc search.
"""

from .ring import (RING_LABELS, RingConstructionError, RingSpec, RingTable,
                   automorphism_group_order, build_ring,
                   ring_automorphism_generators)
from .geom import Plane, build_plane, det3, iter_bits, plane_summary
from .group import (Collineation, MinImageBudgetExceeded, PermGroup,
                    chain_with_base, collineation_generators,
                    collineation_group, collineation_permutation, compose,
                    element_order, expected_collineation_order, inverse,
                    is_minimal_image, linear_collineation_group,
                    minimal_image, orbit_of_set, pointwise_stabilizer,
                    setwise_stabilizer)
from .arc import (analyze, arc_automorphism_group, arc_mask,
                  automorphisms_all_linear, candidate_mask, class_histogram,
                  class_multiplicities, empty_classes, fixture_names,
                  fixture_text, format_arc, format_point, is_blocking_set,
                  is_complete, is_two_arc, line_multiplicities, load_fixture,
                  max_line_multiplicity, orbit_partition, oval_classification,
                  parse_arc, phi_image, read_arc, secant_line_mask,
                  tangent_alignment_check, write_arc)
from .search import (SearchConfig, SearchResult, SearchState, SearchStats,
                     blocking_set_prune, brute_force_maximal_arcs,
                     canonical_prefix_filter, dedup_arcs, intra_class_cap,
                     merged_feasibility, read_checkpoint, run_search,
                     write_checkpoint)

__version__ = "0.1.0"
