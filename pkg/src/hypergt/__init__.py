"""Group testing on arbitrary hypergraphs.

The hidden defective set is one hyperedge of a known hypergraph.  This
package builds and certifies non-adaptive test matrices, runs few-stage
searches against a simulated oracle, and evaluates lower and upper bounds
on the number of tests.
"""

from ._kernels import BACKEND
from .codes import (Certification, TestMatrix, construct_discard_matrix, decode_survivors,
                    from_family, is_p_discarding, is_separable, random_matrix, response_vector,
                    to_family)
from .errors import (AdaptivityError, BudgetExceeded, HyperGTError, InconsistencyError,
                     ParseError, PreconditionError)
from .hypergraph import (Hypergraph, Metrics, gen_bounded_intersection, gen_random_uniform,
                         high_degree_edge_subset, metrics, normalize)
from .stages import (Schedule, StageTrace, default_schedule, mutual_difference_prune,
                     one_stage_search, reduced_discard_stage, s_stage_search, three_stage_search,
                     two_stage_search)

__version__ = "0.1.0"
