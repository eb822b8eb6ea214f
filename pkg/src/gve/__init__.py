"""Exact cut-level toolkit for graded extensions of valuation rings in
Q-graded skew group rings."""

__version__ = "0.1.0"

from .scalars import PI, PiLinear, PiPrecisionError, max_pi_bits_used, pilinear_cmp  # noqa: E402
from .groups import END, ValueGroup, ValueVector, GroupAutomorphism  # noqa: E402
from .cuts import (  # noqa: E402
    Cut,
    CutError,
    co_inverse,
    cut_closure,
    cut_sum,
    cut_twist,
    is_idempotent,
    is_principal,
    o_left,
    radical,
    residual_left,
    residual_right,
)
from .maps import (  # noqa: E402
    Family,
    GradedMap,
    GradedMapTable,
    check_graded_map,
    classify_table,
    farey_grid,
    smallest_sum_zero,
)
from .extensions import (  # noqa: E402
    GradedFamily,
    SigmaAction,
    TypeVerdict,
    build_type_e,
    build_type_h,
    check_axioms,
    classify_cyclic,
    classify_global,
    extract_slice,
    m_family,
    sup_diagnostics,
)
from .dsl import load, parse, print_doc  # noqa: E402
from .fixtures import make_fixture, run_all  # noqa: E402
